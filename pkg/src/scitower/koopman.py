"""Koopman matrices from point samples and pseudospectrum towers.

The trial dictionary is the Fourier family ``e_j(x) = exp(2 pi i j x)`` for
``|j| <= J`` and the test family is its conjugate for ``|i| <= I`` with
``I >= J``.  Matrix entries are midpoint-rule sums over a dyadic partition,

    A[i, j] = sum_P e_j(F(x_P)) * conj(e_i(x_P)) * w_P,

so a base map at indices ``(n2, n1)`` reads exactly the ``2**n1`` values
``F(x_P)``.  Residuals are smallest singular values of ``A - z E`` where
``E`` embeds the trial range into the test range.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .dynamics import DynamicalMap, Transcript, evaluate
from .errors import EmptySet, NyquistViolation
from .hyperspace import (DEFAULT_HALF_WIDTH, CompactSet, EmptyResult, Grid, GridField,
                         hausdorff_distance, make_grid, threshold_sublevel)
from .quadrature import partition

SVD_CHUNK = 512

__all__ = [
    "Dictionary", "KoopmanMatrix", "ResidualField", "PseudospectrumRun",
    "assemble_matrix", "residual", "residual_field", "gamma_base",
    "gamma_stabilized", "run_tower", "min_level", "default_sizer", "matched_schedule",
    "residual_field_of",
]


@dataclass(frozen=True)
class Dictionary:
    J: int
    I: int

    def __post_init__(self):
        if self.J < 0 or self.I < self.J:
            raise ValueError(f"need 0 <= J <= I, got J={self.J}, I={self.I}")

    @classmethod
    def for_index(cls, n2: int, ratio: float = 2.0) -> "Dictionary":
        """Default sizing ``J = n2``, ``I = ceil(ratio * J)``."""
        if ratio < 1:
            raise ValueError("test ratio must be at least 1")
        return cls(J=int(n2), I=int(math.ceil(ratio * n2 - 1e-12)))

    @property
    def trial(self) -> np.ndarray:
        return np.arange(-self.J, self.J + 1)

    @property
    def test(self) -> np.ndarray:
        return np.arange(-self.I, self.I + 1)

    def embedding(self) -> np.ndarray:
        E = np.zeros((2 * self.I + 1, 2 * self.J + 1))
        cols = np.arange(2 * self.J + 1)
        E[cols + (self.I - self.J), cols] = 1.0
        return E

    def admits(self, n1: int) -> bool:
        return 2 * self.I < 2 ** n1


def min_level(d: Dictionary) -> int:
    """Smallest quadrature level that is sub-Nyquist for ``d``."""
    return max(1, (2 * d.I).bit_length())


def default_sizer(ratio: float = 2.0) -> Callable[[int], Dictionary]:
    return lambda n2: Dictionary.for_index(n2, ratio)


@dataclass(frozen=True, eq=False)
class KoopmanMatrix:
    A: np.ndarray
    J: int
    I: int
    n1: int
    map: str

    @property
    def dictionary(self) -> Dictionary:
        return Dictionary(self.J, self.I)


class ResidualField(GridField):
    """``z -> sigma_inf(A - zE)`` sampled on a grid."""


def _check_nyquist(d: Dictionary, n1: int) -> None:
    if not d.admits(n1):
        raise NyquistViolation(
            f"quadrature level {n1} has {2 ** n1} samples; need 2*I={2 * d.I} < 2**n1 "
            f"(use n1 >= {min_level(d)})")


def _assemble_from_values(xs: np.ndarray, fx: np.ndarray, w: np.ndarray,
                          d: Dictionary) -> np.ndarray:
    trial = np.exp(2j * np.pi * np.outer(fx, d.trial))          # (P, 2J+1)
    test = np.exp(-2j * np.pi * np.outer(xs, d.test)) * w[:, None]  # (P, 2I+1)
    return test.T @ trial


def _sample_map(F: DynamicalMap, xs: np.ndarray, t: Optional[Transcript]) -> np.ndarray:
    return np.array([evaluate(F, x, t) for x in xs.tolist()])


def assemble_matrix(F: DynamicalMap, d: Dictionary, n1: int,
                    transcript: Optional[Transcript] = None) -> KoopmanMatrix:
    _check_nyquist(d, n1)
    lvl = partition(n1)
    fx = _sample_map(F, lvl.samples, transcript)
    A = _assemble_from_values(lvl.samples, fx, lvl.weights, d)
    return KoopmanMatrix(A=A, J=d.J, I=d.I, n1=n1, map=F.describe())


def _sigma_min(A: np.ndarray, E: np.ndarray, zs: np.ndarray) -> np.ndarray:
    out = np.empty(zs.size)
    for s in range(0, zs.size, SVD_CHUNK):
        zc = zs[s:s + SVD_CHUNK]
        stack = A[None, :, :] - zc[:, None, None] * E[None, :, :]
        sv = np.linalg.svd(stack, compute_uv=False)
        out[s:s + SVD_CHUNK] = sv[:, -1]
    return out


def _matrix_of(A) -> np.ndarray:
    return A.A if isinstance(A, KoopmanMatrix) else np.asarray(A, dtype=complex)


def residual(A: Union[KoopmanMatrix, np.ndarray], z: complex) -> float:
    """Smallest singular value of ``A - z E``.

    A plain array is treated as a square-embedded or tall matrix whose
    columns align with the centred rows.
    """
    M = _matrix_of(A)
    E = _embedding_for(M)
    return float(_sigma_min(M, E, np.array([complex(z)]))[0])


def _embedding_for(M: np.ndarray) -> np.ndarray:
    rows, cols = M.shape
    if rows < cols or (rows - cols) % 2:
        raise ValueError(f"matrix shape {M.shape} is not a centred (2I+1)x(2J+1) block")
    E = np.zeros((rows, cols))
    c = np.arange(cols)
    E[c + (rows - cols) // 2, c] = 1.0
    return E


def residual_field_of(A: Union[KoopmanMatrix, np.ndarray], grid: Grid) -> ResidualField:
    M = _matrix_of(A)
    return ResidualField(grid, _sigma_min(M, _embedding_for(M), grid.points))


def residual_field(F: DynamicalMap, d: Dictionary, n2: int, n1: int,
                   half_width: float = DEFAULT_HALF_WIDTH,
                   transcript: Optional[Transcript] = None) -> ResidualField:
    K = assemble_matrix(F, d, n1, transcript)
    return residual_field_of(K, make_grid(n2, half_width))


def gamma_base(F: DynamicalMap, d: Dictionary, eps: float, n2: int, n1: int,
               half_width: float = DEFAULT_HALF_WIDTH,
               transcript: Optional[Transcript] = None):
    """``{z in G_n2 : h(z) < eps - 1/n2}`` from the level-``n1`` matrix."""
    field_ = residual_field(F, d, n2, n1, half_width, transcript)
    return threshold_sublevel(field_, eps - 1.0 / n2)


def gamma_stabilized(F: DynamicalMap, d: Dictionary, eps: float, n2: int, n1: int,
                     half_width: float = DEFAULT_HALF_WIDTH,
                     transcript: Optional[Transcript] = None):
    """Select z when some admissible level ``k <= n1`` passes the threshold.

    The map is queried on every sample of every level ``1..n1``.  Levels
    below the Nyquist bound of ``d`` are read but not used, because their
    aliased matrices would keep spurious points forever in the union.
    """
    _check_nyquist(d, n1)
    grid = make_grid(n2, half_width)
    tau = eps - 1.0 / n2
    mask = np.zeros(grid.points.size, dtype=bool)
    E = d.embedding()
    for k in range(1, n1 + 1):
        lvl = partition(k)
        fx = _sample_map(F, lvl.samples, transcript)
        if not d.admits(k):
            continue
        A = _assemble_from_values(lvl.samples, fx, lvl.weights, d)
        mask |= _sigma_min(A, E, grid.points) < tau
    origin = grid.descriptor()
    if not mask.any():
        return EmptyResult(origin=origin, threshold=tau)
    out = CompactSet.__new__(CompactSet)
    object.__setattr__(out, "points", grid.points[mask].copy())
    object.__setattr__(out, "origin", origin)
    return out


@dataclass
class PseudospectrumRun:
    eps: float
    schedule: list
    stages: list
    distances: list
    notes: list = field(default_factory=list)
    stabilized: bool = False
    map: str = ""
    query_counts: list = field(default_factory=list)

    @property
    def final(self):
        return self.stages[-1]

    def summary(self) -> dict:
        return {
            "map": self.map,
            "eps": self.eps,
            "base_map": "stabilized" if self.stabilized else "base",
            "schedule": [list(s) for s in self.schedule],
            "stage_point_counts": [len(s) for s in self.stages],
            "stage_queries": list(self.query_counts),
            "consecutive_hausdorff": self.distances,
            "notes": list(self.notes),
        }


def _normalize_schedule(schedule) -> list[tuple[int, int]]:
    if isinstance(schedule, tuple) and len(schedule) == 2 and \
            all(isinstance(s, (list, tuple, range)) for s in schedule):
        schedule = [(a, b) for a in schedule[0] for b in schedule[1]]
    sched = [(int(a), int(b)) for a, b in schedule]
    if not sched:
        raise ValueError("schedule must not be empty")
    for (a0, b0), (a1, b1) in zip(sched, sched[1:]):
        if (a1, b1) <= (a0, b0):
            raise ValueError(f"schedule must increase: {(a0, b0)} then {(a1, b1)}")
    return sched


def matched_schedule(n2s: Sequence[int], sizer=None) -> list[tuple[int, int]]:
    """Pair each ``n2`` with the smallest sub-Nyquist quadrature level."""
    sizer = sizer or default_sizer()
    return [(n2, min_level(sizer(n2))) for n2 in n2s]


def run_tower(F: DynamicalMap, sizer: Optional[Callable[[int], Dictionary]], eps: float,
              schedule, half_width: float = DEFAULT_HALF_WIDTH,
              stabilized: Optional[bool] = None) -> PseudospectrumRun:
    """Evaluate base maps along ``schedule`` and record the Cauchy tail.

    No limit is claimed: the run reports each stage and the Hausdorff
    distance between consecutive nonempty stages.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    sizer = sizer or default_sizer()
    sched = _normalize_schedule(schedule)
    use_stab = F.measure_preserving if stabilized is None else stabilized
    base = gamma_stabilized if use_stab else gamma_base
    stages, counts = [], []
    for n2, n1 in sched:
        t = Transcript()
        stages.append(base(F, sizer(n2), eps, n2, n1, half_width, t))
        counts.append(len(t))
    dists, notes = [], []
    for idx in range(1, len(stages)):
        try:
            dists.append(hausdorff_distance(stages[idx - 1], stages[idx]))
        except EmptySet:
            dists.append(None)
            notes.append(f"stage {idx - 1}->{idx}: empty output, distance skipped")
    return PseudospectrumRun(eps=eps, schedule=sched, stages=stages, distances=dists,
                             notes=notes, stabilized=use_stab, map=F.describe(),
                             query_counts=counts)
