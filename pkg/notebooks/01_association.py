"""
Cross-tables and Cramer's V
===========================

Build a contingency table from two code columns, then turn its
chi-square statistic into Cramer's V.
"""

import numpy as np

from fselect import ContingencyTable, cramers_v, cvtest, gen_ct

x = np.array([0, 1, 2, 0, 1, 2, 0])
y = np.array([0, 0, 1, 1, 0, 1, 0])
table = gen_ct(x, y, 3, 2)
print(table.counts)
print("row marginals", table.row_marginals, "col marginals", table.col_marginals)

res = cramers_v(table)
print(f"chi2 = {res.chi2:.6f}  (77/18 = {77 / 18:.6f})")
print(f"V    = {res.v:.6f}")

# %%
# V lies in [0, 1]: independent variables give 0, a one-to-one pairing
# gives 1, and a constant variable is defined to give 0.

print(cramers_v(ContingencyTable.from_counts([[5, 5], [5, 5]])).v)
print(cvtest([0, 0, 1, 1, 2], [3, 3, 0, 0, 1]).v)
print(cvtest([4, 4, 4, 4], [0, 1, 0, 1], 5, 2).v)

# %%
# V depends only on the joint frequencies: repeating every sample leaves
# it unchanged, and so does relabelling categories.

rng = np.random.default_rng(0)
a = rng.integers(0, 4, 200)
b = (a + rng.integers(0, 2, 200)) % 4
print(cvtest(a, b).v, cvtest(np.tile(a, 3), np.tile(b, 3)).v, cvtest((a + 1) % 4, b).v)
