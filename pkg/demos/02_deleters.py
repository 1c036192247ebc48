# coding: utf-8

# # Deleting one of two copies
#
# A deleter takes `|psi>|psi>` and tries to send the second mode to a fixed
# blank state `Sigma = cos(t)|0> + sin(t)|1>`. The `pb` deleter does this
# exactly for basis states; the `imperfect` deleter adds a 2x2 coupling
# `(a0, a1, b0, b1)` that must form a unitary.

# In[1]:

import math

from qclonedel import (
    ImperfectDeleterParams,
    delete_scenario,
    imperfect_delete_machine,
    pb_delete_machine,
    validate_machine,
)
from qclonedel.metrics import average_over_alpha2


# In[2]:

pb = pb_delete_machine()
r = delete_scenario(pb, 0.5)
print("fidelity of deletion at x=1/2:", r.F)
print("fidelity of the surviving copy:", r.F_input)
print("averages:", average_over_alpha2(lambda x: delete_scenario(pb, x).F),
      average_over_alpha2(lambda x: delete_scenario(pb, x).F_input))


# A symmetric choice with `|g|^2 = |a0 + a1|^2 = 1` and `|h|^2 = |b0 + b1|^2 = 1`
# reproduces the `pb` averages exactly.

# In[3]:

s = math.sqrt(3) / 2
p = ImperfectDeleterParams(s, 0.5j, 0.5j, s)
m = imperfect_delete_machine(p)
print("gg* =", p.gg, " hh* =", p.hh, " k =", p.k, " k1 =", p.k1)
print("mean D:", average_over_alpha2(lambda x: delete_scenario(m, x).D))
print("mean F:", average_over_alpha2(lambda x: delete_scenario(m, x).F))


# Coefficients that are not unitary are refused at build time; with
# `check=False` the machine is built anyway so the validation report can
# say what is wrong.

# In[4]:

r2 = 1 / math.sqrt(2)
bad = imperfect_delete_machine(ImperfectDeleterParams(r2, r2, r2, r2), check=False)
print("\n".join(validate_machine(bad).lines()))
