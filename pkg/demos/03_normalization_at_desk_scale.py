# coding: utf-8

# # Why desk-scale comparisons need care with normalization
#
# Thresholds are written 2 pi c / log T, which is c mean spacings only
# asymptotically. At height T the true mean spacing is 2 pi / log(T / 2 pi),
# so at T ~ 7.5e4 the threshold is about 0.84 mean spacings, and lower zeros
# (wider spacing) see an even smaller effective c. The empirical statistics
# land well below f(c) and the GUE CDF. Unfolding each ordinate by the
# smooth counting function removes the bias.

# In[1]:

import math
from pathlib import Path

import numpy as np

from zetagaps import analytic, gaps, gue
from zetagaps.zeros import load_table

table = load_table(Path(__file__).resolve().parent.parent / "data" / "zeros_1e5.zgc")
T = table[100_000]
print(f"log T = {math.log(T):.3f}, log(T/2pi) = {math.log(T / (2 * math.pi)):.3f}")

# In[2]:

g = table.ordinates[:100_001]
unfolded = g / (2 * np.pi) * np.log(g / (2 * np.pi * np.e))  # main term of N(t)
spacing = np.diff(unfolded)

print(f"{'c':>4} {'pairs/N':>9} {'unfolded':>9} {'f(c)':>7} | {'nn cdf':>7} {'unfolded':>9} {'GUE':>7}")
for c in (0.5, 1.0, 1.5):
    pc = gaps.empirical_pair_correlation(table, c, T)
    pc_u = gaps.count_close_pairs(unfolded[:-1], c) / 100_000
    nn = gaps.neighbor_spacing_cdf(table, 1, c, T)
    nn_u = np.mean(spacing <= c)
    print(f"{c:>4} {pc:>9.4f} {pc_u:>9.4f} {analytic.f(c).value:>7.4f} | "
          f"{nn:>7.4f} {nn_u:>9.4f} {gue.nn_cdf(c):>7.4f}")
