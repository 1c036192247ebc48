# coding: utf-8

# # The full results table
#
# `reproduce_paper()` recomputes every published number by simulation and
# quadrature and lists it next to the published value. The command line
# equivalent is `qclonedel reproduce`.

# In[1]:

from qclonedel import reproduce_paper


# In[2]:

table = reproduce_paper()
width = max(len(r.quantity) for r in table.rows)
for r in table.rows:
    target = "" if r.paper_value is None else f"{r.paper_value:.12f}"
    err = "" if r.abs_error is None else f"{r.abs_error:.1e}"
    print(f"{r.quantity:<{width}}  {target:>15}  {r.simulated:.12f}  {err:>8}  {r.convention}")
print("all rows within 1e-10:", table.passed)


# In[3]:

for note in table.notes:
    print("*", note)
