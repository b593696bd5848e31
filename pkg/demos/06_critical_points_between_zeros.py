# coding: utf-8

# # Where xi' vanishes between consecutive zeros
#
# On the critical line i xi'/xi behaves like the sum of 1/(t - gamma), which
# falls from +inf to -inf across every gap. Its root gamma* is computed from
# a truncated sum; the truncation radius moves gamma* by a bounded amount.

# In[1]:

from pathlib import Path

from zetagaps import xi
from zetagaps.zeros import load_table

table = load_table(Path(__file__).resolve().parent.parent / "data" / "zeros_1e5.zgc")

# In[2]:

for n in (1, 2, 3, 100, 10_000):
    cp = xi.find_gamma_star(table, n)
    print(f"n={n:>6}: gamma* = {cp.gamma_star:.6f}, distances "
          f"{cp.left_distance:.4f} / {cp.right_distance:.4f}, residual {cp.residual:.1e}")

# In[3]:

for n in (1, 100, 5000):
    a = xi.find_gamma_star(table, n, xi.ZeroSumConfig(20.0)).gamma_star
    b = xi.find_gamma_star(table, n, xi.ZeroSumConfig(40.0)).gamma_star
    bound = xi.gamma_star_drift_bound(table, n, 20.0, 40.0)
    print(f"n={n:>5}: shift {abs(b - a):.4f} <= bound {bound:.4f}")

# In[4]:

tj = xi.construct_tj(table, 1, 3.0)
print(f"T_j = {tj.T_j:.6f} (offset {tj.offset:.5f}), below gamma_2: {tj.below_next}")
