# coding: utf-8

# # Two-photon scissors
#
# Feeding one photon into each input of the first splitter and heralding two
# counts on the signal detector keeps terms up to two photons:
# |0> + g alpha |1> + (g alpha)^2 / sqrt(2) |2> for the right splitter choice.

# In[1]:

import math

import numpy as np

from qscissors import amplifiers as amp
from qscissors import conditions


# No lossless first splitter gives that pure amplification. The condition
# reduces to x^2 - x + 1 = 0 in x = |t|^2, which has no real root.

# In[2]:

proof = conditions.lossless_infeasibility_proof()
print(proof.notes)
print("discriminant", proof.details["discriminant"])
print("smallest residual over", proof.details["scan_points"], "splitters:",
      round(proof.details["scan_min_residual"], 6))


# A lossless splitter can still match the gain magnitudes if |t|^2 solves
# 5x^2 - 5x + 1 = 0. The price is a sign flip on the two-photon term.

# In[3]:

upper, lower = conditions.sign_shift_roots()
print("sign-shift roots", upper, lower)
a, g2 = math.sqrt(0.1), 2.0
shift = amp.two_photon_sign_shift(a, g2)
print("sign-shift output", np.round(shift.output.amplitudes / shift.output.amplitudes[0], 6))


# Adding a third of the light as loss rescues the pure amplifier. The boundary
# splitter has |t|^2 = |r|^2 = 1/3 and a 2 pi / 3 phase difference.

# In[4]:

pure = amp.two_photon_pure_closed_form(a, g2)
print("pure output     ", np.round(pure.output.amplitudes / pure.output.amplitudes[0], 6))
print("g alpha, (g alpha)^2/sqrt2:", math.sqrt(g2) * a, g2 * 0.1 / math.sqrt(2))


# The lossless sign-shift device succeeds 1.8 times as often as the lossy pure one.

# In[5]:

print("P(pure) =", pure.probability)
print("P(sign) =", shift.probability)
print("ratio   =", shift.probability / pure.probability)


# The other layout sends |2> into a lossless first splitter and heralds one
# count on each detector. Its lossy second splitter can also be found by a
# numerical search over passive splitters.

# In[6]:

bs2, residual = amp.fit_variant_ii_splitter()
print("fitted |t|^2 = %.6f, |r|^2 = %.6f, loss = %.6f, residual %.1e"
      % (abs(bs2.t) ** 2, abs(bs2.r) ** 2, bs2.loss, residual))
out = amp.two_photon_variant_ii(a, g2, bs2=bs2)
print("variant output  ", np.round(out.output.amplitudes[:3] / out.output.amplitudes[0], 6))
