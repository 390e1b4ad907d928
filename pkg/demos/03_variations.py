"""Power variations: the fourth variation of a BTBM is of order t.

The quadratic variation blows up and the sixth vanishes as the mesh shrinks;
the fourth settles near 3t.  Conditionally on the clock its mean is
3 sum (d|B|)^2 and its variance decays with refinement.
"""
import numpy as np

from btbm import harness, pathstats
from btbm.paths import make_partition
from btbm.processes import ProcessVariant, simulate_batch

t = 1.0
for n in (2 ** 8, 2 ** 10, 2 ** 12):
    b = simulate_batch(ProcessVariant.simple(), make_partition(t, n), 5, 100)
    v = {p: np.median(pathstats.variation_values(b.values, p)) for p in (2, 4, 6)}
    cond = np.median(3 * pathstats.variation_values(b.clock, 2))
    print(f"n={n:5d}  V2={v[2]:8.3f}  V4={v[4]:.3f}  V6={v[6]:.4f}  E[V4|B]={cond:.3f}")

# %% Conditional variance of V4 for fixed inner paths
rep = harness.variance_decay_study(t, [2 ** 6, 2 ** 8, 2 ** 10], n_paths=5, n_outer=400, seed=2)
print("median conditional variance:", np.round(rep.details["median_variance"], 4))
print("exact (Isserlis):           ", np.round(rep.details["median_exact_variance"], 4))
