"""Seeded Monte Carlo sampling of bootstrap unique counts.

Random numbers come from Philox4x64-10 (Salmon et al., Random123).  The
replicates of a run are cut into fixed blocks of ``BLOCK`` replicates; block
``b`` of a run with seed ``s`` uses key ``(s, b)`` and counters 0, 1, 2, ...
so the outcome of a run does not depend on how blocks are spread over
workers.  Raw 64-bit words are mapped to ``0..N-1`` by rejection: a word
``x`` is kept when ``x < N * floor(2**64 / N)`` and the draw is ``x % N``.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import numpy as np

from .multivariate import CategoryProfile

__all__ = [
    "BLOCK",
    "DrawStream",
    "EmpiricalDistribution",
    "SimConfig",
    "empirical_distribution",
    "sample_category_counts",
    "sample_unique_count",
    "tv_distance",
]

BLOCK = 1 << 16
_U64 = np.uint64
_MAX = (1 << 64) - 1


class DrawStream:
    """Uniform integer draws from one Philox4x64-10 stream."""

    def __init__(self, seed: int, stream: int = 0) -> None:
        if not 0 <= seed <= _MAX or not 0 <= stream <= _MAX:
            raise ValueError("seed and stream must be 64-bit unsigned integers")
        # numpy increments the counter before each block; start at -1 so the
        # first output block is counter 0
        self._bitgen = np.random.Philox(
            counter=np.array([_MAX] * 4, dtype=_U64),
            key=np.array([seed, stream], dtype=_U64),
        )

    def raw(self, size: int) -> np.ndarray:
        return self._bitgen.random_raw(size)

    def integers(self, n: int, size: int) -> np.ndarray:
        """``size`` independent uniform draws from ``0..n-1``."""
        if n < 1:
            raise ValueError(f"n must be at least 1, got {n}")
        x = self.raw(size)
        if n & (n - 1) == 0:
            return (x & _U64(n - 1)).astype(np.int64)
        limit = _U64(((1 << 64) // n) * n)
        bad = np.flatnonzero(x >= limit)
        for i in bad:
            y = self.raw(1)[0]
            while y >= limit:
                y = self.raw(1)[0]
            x[i] = y
        return (x % _U64(n)).astype(np.int64)


def _require_N(N: int) -> None:
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")


def sample_unique_count(N: int, A: int, rng: DrawStream) -> int:
    _require_N(N)
    if A == 0:
        return 0
    return int(np.unique(rng.integers(N, A)).size)


def sample_category_counts(profile: CategoryProfile | Sequence[int], A: int,
                           rng: DrawStream) -> tuple[int, ...]:
    prof = profile if isinstance(profile, CategoryProfile) else CategoryProfile(profile)
    return tuple(int(c) for c in _category_block(prof, A, rng, 1)[0])


def _unique_block(N: int, A: int, rng: DrawStream, reps: int) -> np.ndarray:
    if A == 0:
        return np.zeros(reps, dtype=np.int64)
    draws = np.sort(rng.integers(N, reps * A).reshape(reps, A), axis=1)
    return 1 + np.count_nonzero(np.diff(draws, axis=1), axis=1)


def _category_block(prof: CategoryProfile, A: int, rng: DrawStream, reps: int) -> np.ndarray:
    C = prof.C
    if A == 0:
        return np.zeros((reps, C), dtype=np.int64)
    draws = np.sort(rng.integers(prof.N, reps * A).reshape(reps, A), axis=1)
    first = np.ones_like(draws, dtype=bool)
    first[:, 1:] = draws[:, 1:] != draws[:, :-1]
    edges = np.cumsum(prof.sizes)
    cat = np.searchsorted(edges, draws, side="right")
    rows = np.repeat(np.arange(reps), A).reshape(reps, A)
    flat = (rows * C + cat)[first]
    return np.bincount(flat, minlength=reps * C).reshape(reps, C)


@dataclass(frozen=True)
class SimConfig:
    """A Monte Carlo run: give exactly one of ``N`` or ``profile``."""

    seed: int
    replicates: int
    A: int
    N: int | None = None
    profile: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if self.A < 0:
            raise ValueError("A must be non-negative")
        if (self.N is None) == (self.profile is None):
            raise ValueError("give exactly one of N or profile")
        if self.N is not None:
            _require_N(self.N)
        else:
            object.__setattr__(self, "profile", CategoryProfile(self.profile).sizes)
        if not 0 <= self.seed <= _MAX:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class EmpiricalDistribution:
    counts: dict[Hashable, int] = field(default_factory=dict)
    total: int = 0

    def freq(self, outcome: Hashable) -> float:
        return self.counts.get(outcome, 0) / self.total


def _run_block(args: tuple[SimConfig, int]) -> Counter:
    config, b = args
    reps = min(BLOCK, config.replicates - b * BLOCK)
    rng = DrawStream(config.seed, b)
    if config.N is not None:
        ks = _unique_block(config.N, config.A, rng, reps)
        values, tallies = np.unique(ks, return_counts=True)
        return Counter({int(v): int(t) for v, t in zip(values, tallies)})
    prof = CategoryProfile(config.profile)
    ks = _category_block(prof, config.A, rng, reps)
    rows, tallies = np.unique(ks, axis=0, return_counts=True)
    return Counter({tuple(int(x) for x in r): int(t) for r, t in zip(rows, tallies)})


def empirical_distribution(config: SimConfig, *, workers: int = 1) -> EmpiricalDistribution:
    """Tally outcomes over all replicates; identical for any ``workers``."""
    nblocks = -(-config.replicates // BLOCK)
    tasks = [(config, b) for b in range(nblocks)]
    total: Counter = Counter()
    if workers <= 1 or nblocks == 1:
        for part in map(_run_block, tasks):
            total.update(part)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_block, tasks):
                total.update(part)
    counts = dict(sorted(total.items()))
    return EmpiricalDistribution(counts, config.replicates)


def tv_distance(emp: EmpiricalDistribution, exact: Mapping[Hashable, object]) -> float:
    """Half the L1 distance between empirical frequencies and exact probabilities."""
    keys = sorted(set(emp.counts) | set(exact))
    return 0.5 * math.fsum(abs(emp.freq(k) - float(exact.get(k, 0))) for k in keys)
