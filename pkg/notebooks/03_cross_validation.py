"""
Choosing the subset size by cross-validation
============================================

Only the first feature of this synthetic set carries class information.
Cross-validated naive Bayes accuracy over ranking prefixes should peak at
(or very near) one feature.
"""

from fselect import Objective, cv_curve, select
from fselect.synthetic import planted_informative_dataset

data = planted_informative_dataset(seed=0)
rep = select(data, Objective("mmaiq"))
print("ranking:", rep.indices)

curve = cv_curve(data, rep, K=5, seed=0)
for k, acc in enumerate(curve.accuracy, start=1):
    print(f"k={k:2d} accuracy={acc:.3f}{'  <- best' if k == curve.best_k else ''}")

# %%
# Re-ranking inside each fold removes selection bias from the estimate.

honest = cv_curve(data, rep, K=5, seed=0, reselect=True)
print("best k with per-fold reselection:", honest.best_k)
