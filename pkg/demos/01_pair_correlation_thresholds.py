# coding: utf-8

# # Runs of moderate gaps from pair correlation
#
# If a proportion f(c) of zeros had a neighbour closer than c mean spacings,
# at most r f(c) of them could fail to start a run of r gaps that are all at
# least c. So 1 - r f(c) > 0 guarantees a positive proportion of such runs.
# Here we tabulate the largest admissible c for several r.

# In[1]:

import math

import numpy as np

from zetagaps import analytic

# f(alpha) is the integral of 1 - (sin pi u / pi u)^2. Quadrature and the
# closed form agree to about 1e-12.

# In[2]:

for alpha in (0.25, 1.0, 1.46389, 10.0):
    q = analytic.f(alpha)
    print(f"f({alpha:>8}) = {q.value:.12f}   closed form {analytic.f_closed_form(alpha):.12f}")

# The thresholds c_r solve r f(c_r) = 1.

# In[3]:

print(f"{'r':>5} {'c_r':>12} {'1 - r f(c_r)':>14}")
for r in (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 100, 1000):
    c = analytic.solve_cr(r)
    bound = analytic.pcc_lower_bound(analytic.BoundParams(r, c))
    print(f"{r:>5} {c:>12.7f} {bound:>14.1e}")

# For small c the integrand is at most (pi u)^2 / 3, so f(c) <= pi^2 c^3 / 9.
# Requiring r pi^2 c^3 / 9 < 1 and c <= 1/pi gives a simple admissible
# threshold. The cap 1/pi binds up to r = 28.

# In[4]:

grid = np.linspace(1e-3, 1 / math.pi, 8)
for c in grid:
    print(f"c = {c:.4f}: f = {analytic.f(c).value:.3e} <= cubic {analytic.cubic_bound(c):.3e}")
print("last r where the cap 1/pi binds:", analytic.corollary_crossover())
