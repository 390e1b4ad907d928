"""Reproducible random streams for replicate-parallel Monte Carlo.

Every stream is a Philox (counter-based) generator keyed by
``(master seed, role, index)`` through :class:`numpy.random.SeedSequence`.
Path-level work uses one index per replicate; bulk terminal sampling uses
one index per fixed-size block of replicates.  Neither depends on how the
replicates are distributed over workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# role identifiers; fixed forever, changing them changes every stream
INNER = 0
CHOICE = 1
OUTER = 2
CONDITIONAL = 3
RESAMPLE = 4

ROLE_NAMES = {
    "inner": INNER,
    "choice": CHOICE,
    "outer": OUTER,
    "conditional": CONDITIONAL,
    "resample": RESAMPLE,
}

# index scopes
REPLICATE = 0
BLOCK = 1
DERIVED = 2

#: replicates per bulk block; part of the stream contract
BLOCK_SIZE = 16384


def make_stream(
    seed: int, role: int, index: int, sub: int = 0, scope: int = REPLICATE
) -> np.random.Generator:
    """Return the generator keyed by ``(seed, scope, role, index, sub)``."""
    if seed is None or int(seed) < 0:
        raise ValueError("seed must be a non-negative integer")
    key = (int(scope), int(role), int(index), int(sub))
    ss = np.random.SeedSequence(int(seed), spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


def block_stream(seed: int, role: int, block: int, sub: int = 0) -> np.random.Generator:
    """Stream shared by all replicates of one bulk block."""
    return make_stream(seed, role, block, sub, scope=BLOCK)


@dataclass(frozen=True)
class ReplicateStreams:
    """Stream handle for one replicate.

    ``outer(i)`` is the stream of outer copy ``i`` (component ``i`` of a
    d-dimensional outer process when only one copy is in play).
    """

    seed: int
    replicate: int

    def inner(self) -> np.random.Generator:
        return make_stream(self.seed, INNER, self.replicate)

    def choice(self) -> np.random.Generator:
        return make_stream(self.seed, CHOICE, self.replicate)

    def outer(self, copy: int = 0) -> np.random.Generator:
        return make_stream(self.seed, OUTER, self.replicate, copy)

    def role(self, name: str, sub: int = 0) -> np.random.Generator:
        return make_stream(self.seed, ROLE_NAMES[name], self.replicate, sub)


def blocks(n_replicates: int, block_size: int = BLOCK_SIZE):
    """Yield ``(block_index, start, stop)`` covering ``range(n_replicates)``."""
    for b, start in enumerate(range(0, n_replicates, block_size)):
        yield b, start, min(start + block_size, n_replicates)


def derive_seed(seed: int, *key: int) -> int:
    """Child master seed for an independent sub-experiment named by ``key``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(DERIVED,) + tuple(int(k) for k in key))
    return int(ss.generate_state(2, np.uint64)[0] >> np.uint64(1))
