# coding: utf-8

# # One-photon scissors
#
# A single photon split on a 50/50 beam splitter, one half mixed with a weak
# coherent state on a second splitter, and a click pattern on the two
# detectors. What survives is the coherent state cut down to its vacuum and
# one-photon parts, with the one-photon part scaled by the gain g.

# In[1]:

import math

import numpy as np

from qscissors import amplifiers as amp
from qscissors.metrics import fidelity_vs_amplified_coherent


# Pick a weak input, |alpha|^2 = 0.1, and ask for intensity gain g^2 = 2.
# The second splitter carries the gain: |t2|^2 = g^2 / (1 + g^2).

# In[2]:

alpha = math.sqrt(0.1)
g2 = 2.0
out = amp.one_photon_amplifier(alpha, g2)
print("success probability", out.probability)
print("output amplitudes  ", np.round(out.output.amplitudes, 6))


# The heralded state should be proportional to |0> + g alpha |1>.

# In[3]:

expected = np.array([1, math.sqrt(g2) * alpha])
expected /= np.linalg.norm(expected)
print("matches |0> + g alpha |1>:", np.allclose(out.output.amplitudes, expected))


# The closed form assumed at most one photon in the coherent input. A full
# Fock simulation keeps up to 10 photons, runs both splitters and projects on
# the herald. The answers agree to machine precision.

# In[4]:

sim = amp.one_photon_amplifier(alpha, g2, simulated=True)
print("simulated probability", sim.probability)
print("difference           ", abs(sim.probability - out.probability))


# Fidelity against the ideal amplified coherent state |g alpha> drops as the
# gain grows.

# In[5]:

for gain2 in (1, 2, 4, 8):
    o = amp.one_photon_amplifier(alpha, gain2)
    f = fidelity_vs_amplified_coherent(o.output, math.sqrt(gain2) * alpha)
    print(f"g^2 = {gain2:>2}  P = {o.probability:.4f}  F = {f:.5f}")
