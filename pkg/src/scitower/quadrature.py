"""Dyadic midpoint partitions of [0, 1)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimit

MAX_LEVEL = 24


@dataclass(frozen=True, eq=False)
class PartitionLevel:
    n: int
    left: np.ndarray
    samples: np.ndarray
    weights: np.ndarray

    @property
    def cells(self) -> list[tuple[float, float]]:
        w = 2.0 ** -self.n
        return [(a, a + w) for a in self.left.tolist()]

    def __len__(self) -> int:
        return self.samples.size


def _check_level(n: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"partition level must be a positive integer, got {n!r}")
    if n > MAX_LEVEL:
        raise ResourceLimit(f"partition level {n} exceeds the guard {MAX_LEVEL}")


def partition(n: int) -> PartitionLevel:
    """Uniform cells ``[j 2^-n, (j+1) 2^-n)`` with midpoints and equal weights."""
    _check_level(n)
    n = int(n)
    size = 1 << n
    j = np.arange(size, dtype=float)
    # all values are dyadic rationals, exact in binary floating point
    return PartitionLevel(n=n, left=j / size, samples=(j + 0.5) / size,
                          weights=np.full(size, 1.0 / size))


def cumulative_samples(n: int) -> list[tuple[int, float, float]]:
    """``(level, x_P, weight)`` for every cell at every level ``1..n``."""
    _check_level(n)
    out = []
    for k in range(1, int(n) + 1):
        lvl = partition(k)
        out.extend((k, x, w) for x, w in zip(lvl.samples.tolist(), lvl.weights.tolist()))
    return out
