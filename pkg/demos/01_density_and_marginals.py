"""Transition density of Brownian-time Brownian motion and its marginals.

Run with ``python demos/01_density_and_marginals.py``.
"""
import numpy as np

from btbm import kernel
from btbm.processes import ProcessVariant, sample_terminal

# %% The density is a mixture of Gaussians over the clock |B_t|.
t = 1.0
ys = np.linspace(-3, 3, 13)
for y in ys:
    print(f"K_1(0, {y:+.1f}) = {kernel.density(t, 0.0, y):.6f}")

# it is finite on the diagonal in one dimension
print("on-diagonal:", kernel.density(t, 0.0, 0.0), "closed form:", kernel.on_diagonal(t))

# %% Three constructions share one terminal law.
for v in (ProcessVariant.simple(), ProcessVariant.k_excursion(3), ProcessVariant.inf_excursion()):
    x, clock = sample_terminal(v, t, 50_000, seed=7)
    print(f"{v.label:>16}: E X^2 = {np.mean(x ** 2):.4f}   E X^4 = {np.mean(x ** 4):.4f}")

print("closed forms:      E X^2 =", round(kernel.moment(t, 2), 4), "  E X^4 =", kernel.moment(t, 4))

# %% Empirical CDF against the kernel CDF
x, _ = sample_terminal(ProcessVariant.simple(), t, 20_000, seed=8)
F = kernel.cdf_function(t)
grid = np.linspace(-2, 2, 9)
emp = (x[:, None] <= grid).mean(axis=0)
for g, e, f in zip(grid, emp, F(grid)):
    print(f"z={g:+.1f}  empirical {e:.4f}  kernel {f:.4f}")
