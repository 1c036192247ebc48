# coding: utf-8

# # Cloning a qubit
#
# Two cloners are available: `wz`, which copies the computational basis
# perfectly and loses all coherence, and `bh`, which trades a little accuracy
# everywhere for a copy quality that does not depend on the input.
#
# Inputs are always `sqrt(x)|0> + sqrt(1-x)|1>` with `x = |alpha|^2`.

# In[1]:

import numpy as np

from qclonedel import bh_machine, clone_scenario, wz_machine
from qclonedel.metrics import average_over_alpha2, universality_deviation


# The transformation tables are plain data; the ancilla states are labels
# whose only meaning is their Gram matrix.

# In[2]:

wz = wz_machine()
for basis, ket in wz.table.items():
    print(basis, "->", ket.terms)


# Distortion of one copy, `D = Tr[(rho_a - |psi><psi|)^2]`, across inputs:

# In[3]:

xs = np.linspace(0, 1, 11)
print([round(clone_scenario(wz, x).D_a, 4) for x in xs])
print("mean:", average_over_alpha2(lambda x: clone_scenario(wz, x).D_a))


# The `bh` cloner at `xi = 1/6` shrinks the Bloch vector by `2/3` and the
# distortion is flat at `1/18`.

# In[4]:

bh = bh_machine(1 / 6)
print(bh.space.gram.round(4))
r = clone_scenario(bh, 0.5)
print("rho_a =\n", r.rho_a.matrix.round(6))
print("D =", r.D_a, " 1/18 =", 1 / 18)
print("spread over x:", universality_deviation(lambda x: clone_scenario(bh, x).D_a))


# Outside `1/6 <= xi <= 1/2` the declared Gram matrix is not positive
# semidefinite, so no ancilla states could realize it.

# In[5]:

try:
    bh_machine(0.1)
except ValueError as exc:
    print(type(exc).__name__, exc)
