# coding: utf-8

# # Moving away from gg* = hh* = 1
#
# Unitarity of the coupling forces `|g|^2 + |h|^2 = 2`, so the realizable
# deleters form a one-parameter family `gg* = 1 + delta`, `hh* = 1 - delta`.
# Along it the averages are
#
#     D(delta) = (1/3) (1 + 2 delta^2 / 10)
#     F(delta) = 2/3 + (2 delta M^2 + 1 - delta) / 6
#
# with `M^2 = |<Sigma|1>|^2`. Distortion only grows; fidelity moves up or
# down depending on the sign of `delta (2 M^2 - 1)`.

# In[1]:

import numpy as np

from qclonedel import perturbation_table
from qclonedel.closed_forms import epsilon_expansion


# In[2]:

deltas = np.linspace(-1, 1, 9)
for m2 in (0.0, 0.5, 1.0):
    print(f"M^2 = {m2}")
    for row in perturbation_table(deltas, m2):
        print(f"  delta={row.delta:+.2f}  D={row.D_sim:.6f}  F={row.F_sim:.6f}"
              f"  (closed form err {row.max_error:.1e})")


# The two-parameter expansion in `eps = gg* - hh*`, `eps1 = hh* - 1` can be
# evaluated too, but only the slice `eps = -2 eps1` is reachable by a
# unitary machine.

# In[3]:

print(epsilon_expansion(0.2, -0.1, 1.0), "(reachable)")
print(epsilon_expansion(0.2, 0.3, 1.0), "(not reachable)")
