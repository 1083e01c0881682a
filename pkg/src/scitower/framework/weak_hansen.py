"""The truncated-row tower over finite-support bit matrices.

Inputs are bit matrices ``x(i, j)`` with finitely many ones, stored as a
frozenset of the positions holding a 1.  Evaluations are the coordinate
projections ``x -> x(i, j)``.  Outputs are pairs of finite-support bit
sequences, again stored as sets of one-positions.

* ``DeepEstimator(n, m)``: ``(p_min(n,m), row n of x cut to j < m)``; reads
  the fixed query set ``{(n, 0), ..., (n, m-1)}``.
* ``IntermediateEstimator(n)``: ``(p_n, full row n of x)``; depends on
  every bit of row n, so no finite query set can support it.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from ..baire import lim_at
from ..errors import ResourceLimit
from .problems import AlgorithmVerdict, check_pairs

MAX_QUERY_BOUND = 16

BitMatrix = frozenset


def _prefix_set(prefix: Sequence[int], n: int) -> frozenset:
    if len(prefix) < n:
        raise ValueError(f"need at least {n} prefix bits, got {len(prefix)}")
    return frozenset(j for j in range(n) if prefix[j])


def row(x: BitMatrix, n: int, cut: Optional[int] = None) -> frozenset:
    return frozenset(j for i, j in x if i == n and (cut is None or j < cut))


def flip(x: BitMatrix, coord: tuple) -> BitMatrix:
    return x ^ {coord}


def bit(x: BitMatrix, coord: tuple) -> int:
    return int(coord in x)


@dataclass(frozen=True)
class DeepEstimator:
    n: int
    m: int
    prefix: tuple

    def __call__(self, x: BitMatrix) -> tuple:
        return (_prefix_set(self.prefix, min(self.n, self.m)), row(x, self.n, self.m))

    @property
    def query_set(self) -> frozenset:
        return frozenset((self.n, j) for j in range(self.m))


@dataclass(frozen=True)
class IntermediateEstimator:
    n: int
    prefix: tuple

    def __call__(self, x: BitMatrix) -> tuple:
        return (_prefix_set(self.prefix, self.n), row(x, self.n))


def weak_hansen_instance(n: int, m: int, prefix: Sequence[int]):
    """Return ``(Gamma_n, Gamma_{n,m})`` for row ``n`` and truncation ``m``."""
    if n < 1 or m < 1:
        raise ValueError("row and truncation indices start at 1")
    prefix = tuple(int(b) & 1 for b in prefix)
    _prefix_set(prefix, n)
    return IntermediateEstimator(n, prefix), DeepEstimator(n, m, prefix)


def random_bit_matrix(rng: np.random.Generator, rows: int, cols: int,
                      density: float = 0.5) -> BitMatrix:
    """Random matrix supported on rows ``1..rows`` and columns ``0..cols-1``."""
    mask = rng.random((rows, cols)) < density
    return frozenset((int(i) + 1, int(j)) for i, j in zip(*np.nonzero(mask)))


def random_prefix(rng: np.random.Generator, length: int = 64) -> tuple:
    return tuple(int(b) for b in rng.integers(0, 2, length))


@dataclass(frozen=True)
class Violation:
    query_set: frozenset
    coordinate: tuple
    x: BitMatrix
    y: BitMatrix


def violation_finder(gamma: IntermediateEstimator, q: int,
                     base: Optional[BitMatrix] = None) -> dict:
    """Refute every candidate query set of size ``<= q`` for ``gamma``.

    Only the intersection of a query set with the window
    ``{(n, 0), ..., (n, q)}`` can shield row ``n`` from a flip there, and a
    set of size ``<= q`` always misses one window cell, so enumerating the
    window subsets is exhaustive.  Returns ``{candidate: Violation or None}``.
    """
    if q > MAX_QUERY_BOUND:
        raise ResourceLimit(f"query bound {q} exceeds the guard {MAX_QUERY_BOUND}")
    if q < 0:
        raise ValueError("query bound must be nonnegative")
    x = frozenset() if base is None else base
    window = [(gamma.n, j) for j in range(q + 1)]
    out = {}
    gx = gamma(x)
    for size in range(q + 1):
        for cand in combinations(window, size):
            Q = frozenset(cand)
            found = None
            for c in window:
                if c in Q:
                    continue
                y = flip(x, c)
                if all(bit(x, e) == bit(y, e) for e in Q) and gamma(y) != gx:
                    found = Violation(Q, c, x, y)
                    break
            out[Q] = found
    return out


def random_pairs(rng: np.random.Generator, deep: DeepEstimator, count: int,
                 rows: int, cols: int) -> list:
    """Pairs ``(x, y)`` where ``y`` mostly agrees with ``x`` on the query set."""
    pairs = []
    queried = sorted(deep.query_set)
    for t in range(count):
        x = random_bit_matrix(rng, rows, cols)
        y = x
        # flip a few bits off the query set, sometimes one on it as well
        for _ in range(int(rng.integers(1, 4))):
            c = (int(rng.integers(1, rows + 1)), int(rng.integers(0, cols)))
            if c not in deep.query_set:
                y = flip(y, c)
        if t % 4 == 3 and queried:
            y = flip(y, queried[int(rng.integers(0, len(queried)))])
        pairs.append((x, y))
    return pairs


def check_deep_estimator(deep: DeepEstimator, pairs: Sequence[tuple]) -> AlgorithmVerdict:
    """Both general-algorithm clauses for the fixed query set, on both pair orders."""
    ordered = [p for x, y in pairs for p in ((x, y), (y, x))]
    return check_pairs(ordered, deep, lambda _x: deep.query_set,
                       lambda c, x: bit(x, c))


def output_bit(out: tuple, k: int) -> int:
    """Interleave the output pair: even ``k`` reads ``p``, odd ``k`` reads the row."""
    part, j = out[k % 2], k // 2
    return int(j in part)


def truncation_limits(n: int, prefix: Sequence[int], x: BitMatrix, coords: int,
                      budget: int = 64) -> list:
    """``lim_m Gamma_{n,m}(x)`` per output coordinate, with stage ``m`` = index."""
    prefix = tuple(prefix)
    inter = IntermediateEstimator(n, prefix)

    def family(m, k):
        return output_bit(DeepEstimator(n, m, prefix)(x), k)

    target = inter(x)
    verdicts = [lim_at(family, k, budget) for k in range(coords)]
    return [(v, output_bit(target, v.coordinate)) for v in verdicts]


def stabilization_stage(n: int, x: BitMatrix) -> int:
    r = row(x, n)
    return max(n, (max(r) + 1) if r else 0)
