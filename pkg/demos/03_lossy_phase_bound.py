# coding: utf-8

# # How much loss does a pure amplifier need?
#
# A passive lossy splitter with |t| = |t'| and |r| = |r'| must never add
# photons. For any pair of coherent inputs that bounds the phase difference:
# |cos((Phi_t - Phi_r) / 2)| <= (1 - |t|^2 - |r|^2) / (2 |t| |r|).

# In[1]:

import math

import numpy as np

from qscissors import conditions
from qscissors.amplifiers import pure_amplifier_splitter
from qscissors.optics import PhaseBoundError, embed_tritter, make_lossy


# The pure amplifier needs cos((Phi_t - Phi_r)/2) = 1/2 with |t| = |r|.
# Scanning the bound shows where that becomes allowed.

# In[2]:

for t2 in np.linspace(0.25, 0.5, 6):
    print(f"|t|^2 = |r|^2 = {t2:.3f}  max |cos| = {conditions.lossy_phase_bound(t2):.4f}")


# The crossing is at |t|^2 = 1/3, so at least a third of the light is lost.

# In[3]:

print("minimum loss", conditions.min_loss_for_pure_amp())
try:
    big = math.sqrt(1 / 3 + 1e-6)
    make_lossy(big, big, 2 * math.pi / 3, 0.0)
except PhaseBoundError as exc:
    print("rejected:", exc)


# Any allowed lossy splitter is the visible corner of a larger unitary. The
# boundary splitter needs one extra loss mode.

# In[4]:

emb = embed_tritter(pure_amplifier_splitter())
print(np.round(emb.matrix, 4))
print("unitary:", np.allclose(emb.matrix.conj().T @ emb.matrix, np.eye(3)))


# Worst case over the relative phase of the two coherent inputs: the output
# photon number never exceeds the input.

# In[5]:

ratio, phase = conditions.max_mean_photon_ratio(pure_amplifier_splitter())
print(f"max output/input photon ratio {ratio:.12f} at relative phase {phase:.4f}")
