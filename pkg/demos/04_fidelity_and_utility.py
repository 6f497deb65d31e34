# coding: utf-8

# # Fidelity, probability and utility
#
# Compare the two-photon pure amplifier against networks of N one-photon
# scissors (split the input N ways, amplify each arm, recombine). The utility
# P / (1 - F) rewards devices that are both likely to work and accurate.

# In[1]:

import math

import numpy as np

from qscissors import metrics
from qscissors.amplifiers import AmplifierConfig, Variant


def curve(variant, a2, gains, n=1):
    cfg = AmplifierConfig(variant, math.sqrt(a2), 1.0, n_arms=n)
    return metrics.merit_curve(cfg, gains)


gains = np.array([1.0, 2.0, 3.0, 5.0, 8.0])


# Fidelity at |alpha|^2 = 0.3. Larger networks keep more photon-number terms, so
# they eventually win at high gain.

# In[2]:

a2 = 0.3
rows = {"two-photon": curve(Variant.TWO_PHOTON_PURE, a2, gains)}
for n in (1, 2, 3):
    rows[f"N={n}"] = curve(Variant.N_NETWORK, a2, gains, n)
print("g^2      " + "".join(f"{g:>9g}" for g in gains))
for name, pts in rows.items():
    print(f"{name:<9}" + "".join(f"{p.fidelity:9.5f}" for p in pts))


# Success probability falls quickly with N, because every arm has to herald.

# In[3]:

for name, pts in rows.items():
    print(f"{name:<9}" + "".join(f"{p.probability:9.5f}" for p in pts))


# Utility ratio of the two-photon amplifier over the N = 2 network at
# |alpha|^2 = 0.1.

# In[4]:

two = curve(Variant.TWO_PHOTON_PURE, 0.1, gains)
net = curve(Variant.N_NETWORK, 0.1, gains, 2)
for g, a, b in zip(gains, two, net):
    print(f"g^2 = {g:g}  U ratio = {a.utility / b.utility:.2f}")


# The same curves come out of the command line as CSV:
#
#     qscissors curve --amplifier n-network --n 3 --alpha2 0.3 -o n3.csv
#     qscissors figures --outdir figure-data
