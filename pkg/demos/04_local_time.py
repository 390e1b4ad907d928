"""Local time of the inner clock and the self-intersection integral."""
import numpy as np

from btbm import pathstats
from btbm import streams as st
from btbm.paths import make_partition, sample_inner_path

inner = sample_inner_path(make_partition(1.0, 2 ** 16), st.make_stream(4, st.INNER, 0))
prof = pathstats.local_time(inner)
print(f"band width {prof.epsilon:.4f}, {prof.levels.size} levels")
print("integral of local time:", round(prof.integral(), 5), "(should be t = 1)")

# %% Local time at zero two ways
print("band estimate at 0:", round(float(prof.values[0]), 4))
print("Tanaka formula:   ", round(pathstats.tanaka_local_time(inner), 4))

# %% Occupation of the lower half of the range
med = float(np.median(inner.reflected))
print("time below the median level:", round(pathstats.occupation_measure(inner, (0.0, med)), 4))

# %% Overlap sum against int L^2 da
o = pathstats.overlap_sum(inner)
print("overlap sum:       ", round(o.value, 4))
print("int L^2 da (bands):", round(pathstats.self_intersection(inner), 4))
print("indicator form (diverges with n):", round(o.indicator_value, 2))
