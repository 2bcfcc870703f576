"""
Thread scaling of the selection loop
====================================

Time a full ranking of the synthetic benchmark set (200 features, 20,000
rows, 8 classes) with 1, 2 and 4 worker threads.  The association kernels
release the GIL, so speedup tracks the number of free cores.  On a
machine with fewer cores than workers expect ratios near 1.
"""

import os

from fselect.bench import run_bench
from fselect.synthetic import benchmark_dataset

print("cpus available:", len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count())

data = benchmark_dataset()
timing = run_bench(data, [1, 2, 4], repeats=3)
for row in timing.rows:
    print(f"workers={row.workers}  median={row.median_seconds:.3f}s  speedup={timing.speedup[row.workers]:.2f}")
print("association tests per run:", timing.calls)

# %%
# With only twelve features most steps fall under the inline threshold
# and there is little to parallelize.

small = benchmark_dataset(m=12, r=2000, C=4, informative=4)
timing = run_bench(small, [1, 2, 4], repeats=3)
print({w: round(s, 2) for w, s in timing.speedup.items()})
