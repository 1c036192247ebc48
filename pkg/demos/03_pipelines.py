# coding: utf-8

# # Clone, then delete
#
# The cloner's two output modes are fed straight into a deleter. The joint
# ancilla carries composite labels `(cloner label, deleter label)`, and there
# are two ways to assign their inner products:
#
# * `strict`: tensor product of the two Gram matrices (a genuine composition
#   of isometries, so nothing needs renormalizing);
# * `paper`: composite labels orthogonal, cloner labels weighted
#   `<Qi|Qi> = 1`, `<Yi|Yi> = xi`, then renormalized. This is the bookkeeping
#   that gives the published pipeline numbers.

# In[1]:

import numpy as np

from qclonedel import (
    GramConvention,
    ImperfectDeleterParams,
    bh_machine,
    clone_delete_scenario,
    imperfect_delete_machine,
    pb_delete_machine,
    pipeline_report,
    wz_machine,
)


# In[2]:

wz, bh, pb = wz_machine(), bh_machine(1 / 6), pb_delete_machine()
sym = imperfect_delete_machine(ImperfectDeleterParams.symmetric_example())

for name, c, d in [("wz+pb", wz, pb), ("wz+imperfect", wz, sym),
                   ("bh+pb", bh, pb), ("bh+imperfect", bh, sym)]:
    rep = pipeline_report(c, d, GramConvention.PAPER)
    print(f"{name:14s} mean D = {rep.averages['D']:.6f}  mean F = {rep.averages['F']:.6f}")


# `11/32 = 0.34375` and `7/8` for `bh+pb`. Under the strict convention the
# same pipeline gives different numbers, because `<Qi|Qi> = 1 - 2 xi` there.

# In[3]:

strict = pipeline_report(bh, pb, GramConvention.STRICT)
print("strict:", strict.averages)
print("19/54 =", 19 / 54)


# The paper convention leaves the joint ket unnormalized by `1 + 2 xi`:

# In[4]:

for x in np.linspace(0, 1, 5):
    r = clone_delete_scenario(bh, pb, x)
    print(f"x={x:.2f}  norm^2={r.norm2:.6f}  D={r.D:.6f}  F={r.F:.6f}")
