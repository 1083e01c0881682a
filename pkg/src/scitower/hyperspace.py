"""Finite compact subsets of the complex plane and the Hausdorff metric.

Everything a tower emits is a finite subset of a lattice grid, so a compact
set is stored as a deduplicated complex point cloud.  Threshold selections
that pick nothing return :class:`EmptyResult` instead of an empty set, since
the Hausdorff hyperspace only contains nonempty sets.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptySet

DEDUP_TOL = 1e-12
DEFAULT_HALF_WIDTH = 2.0

__all__ = [
    "Grid", "GridField", "CompactSet", "EmptyResult", "make_grid",
    "hausdorff_distance", "directed_hausdorff", "threshold_sublevel",
    "DEFAULT_HALF_WIDTH",
]


def _as_complex_array(points) -> np.ndarray:
    if isinstance(points, np.ndarray) and points.dtype.kind == "c":
        arr = points.ravel()
    else:
        pts = list(points)
        if pts and isinstance(pts[0], (tuple, list)):
            arr = np.array([complex(a, b) for a, b in pts], dtype=complex)
        else:
            arr = np.asarray(pts, dtype=complex).ravel()
    if not np.all(np.isfinite(arr)):
        raise ValueError("points must be finite complex numbers")
    return arr


def _dedup(arr: np.ndarray, tol: float) -> np.ndarray:
    if arr.size < 2:
        return arr
    xy = np.column_stack([arr.real, arr.imag])
    tree = cKDTree(xy)
    keep = np.ones(arr.size, dtype=bool)
    for i, j in sorted(tree.query_pairs(tol)):
        if keep[i]:
            keep[j] = False
    return arr[keep]


@dataclass(frozen=True, eq=False)
class Grid:
    """Square lattice ``{(a + bi) / n : |a/n|, |b/n| <= R}``.

    Points are computed as ``a / n`` rather than ``a * h`` so that nested
    grids (``n | m``) share bit-identical coordinates.
    """

    n: int
    half_width: float
    points: np.ndarray = field(repr=False)

    @property
    def spacing(self) -> float:
        return 1.0 / self.n

    @property
    def radius_index(self) -> int:
        return int(math.floor(self.half_width * self.n + 1e-9))

    def __len__(self) -> int:
        return self.points.size

    def descriptor(self) -> dict:
        return {"n": self.n, "half_width": self.half_width, "spacing": self.spacing}


def make_grid(n: int, R: float = DEFAULT_HALF_WIDTH) -> Grid:
    if int(n) != n or n < 1:
        raise ValueError(f"grid resolution must be a positive integer, got {n!r}")
    if not R > 0:
        raise ValueError(f"grid half-width must be positive, got {R!r}")
    n = int(n)
    m = int(math.floor(R * n + 1e-9))
    idx = np.arange(-m, m + 1)
    re = idx / n
    # row-major in the imaginary part, then real part
    pts = (re[None, :] + 1j * re[:, None]).ravel()
    return Grid(n=n, half_width=float(R), points=pts)


@dataclass(frozen=True, eq=False)
class CompactSet:
    """A nonempty-by-convention finite point cloud in C."""

    points: np.ndarray
    origin: Optional[dict] = None

    def __init__(self, points, origin: Optional[dict] = None, tol: float = DEDUP_TOL):
        arr = _dedup(_as_complex_array(points), tol)
        object.__setattr__(self, "points", arr)
        object.__setattr__(self, "origin", origin)

    def __len__(self) -> int:
        return self.points.size

    def __iter__(self):
        return iter(self.points.tolist())

    def __bool__(self) -> bool:
        return self.points.size > 0

    def same_points(self, other: "CompactSet", tol: float = DEDUP_TOL) -> bool:
        """True when both clouds contain the same points up to ``tol``."""
        if len(self) != len(other):
            return False
        if len(self) == 0:
            return True
        return directed_hausdorff(self.points, other.points) <= tol and \
            directed_hausdorff(other.points, self.points) <= tol

    def issubset(self, other: "CompactSet", tol: float = DEDUP_TOL) -> bool:
        if len(self) == 0:
            return True
        if len(other) == 0:
            return False
        return directed_hausdorff(self.points, other.points) <= tol

    def to_pairs(self) -> list[list[float]]:
        return [[float(z.real), float(z.imag)] for z in self.points]

    def to_json(self) -> str:
        return json.dumps(self.to_pairs())

    @classmethod
    def from_json(cls, text: str) -> "CompactSet":
        return cls([tuple(p) for p in json.loads(text)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im"])
        for re, im in self.to_pairs():
            w.writerow([repr(re), repr(im)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CompactSet":
        rows = list(csv.reader(io.StringIO(text)))
        if rows and rows[0] and rows[0][0].strip() == "re":
            rows = rows[1:]
        return cls([(float(r[0]), float(r[1])) for r in rows if r])


@dataclass(frozen=True)
class EmptyResult:
    """Explicit outcome of a threshold selection that kept no grid point."""

    origin: Optional[dict] = None
    threshold: Optional[float] = None

    def __len__(self) -> int:
        return 0

    def __bool__(self) -> bool:
        return False

    @property
    def points(self) -> np.ndarray:
        return np.empty(0, dtype=complex)


SetLike = Union[CompactSet, EmptyResult]


def directed_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """``sup_{x in a} inf_{y in b} |x - y|`` for nonempty complex arrays."""
    tree = cKDTree(np.column_stack([b.real, b.imag]))
    dist, _ = tree.query(np.column_stack([a.real, a.imag]), k=1)
    return float(np.max(dist))


def hausdorff_distance(A: SetLike, B: SetLike) -> float:
    a = _as_points(A)
    b = _as_points(B)
    if a.size == 0 or b.size == 0:
        raise EmptySet("Hausdorff distance is undefined for an empty set")
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


def _as_points(S) -> np.ndarray:
    if isinstance(S, (CompactSet, EmptyResult)):
        return S.points
    return _as_complex_array(S)


@dataclass(frozen=True, eq=False)
class GridField:
    """Real values attached to every point of a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.grid.points.shape:
            raise ValueError("field must assign one value to every grid point")

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable[[complex], float]) -> "GridField":
        vals = np.array([fn(complex(z)) for z in grid.points], dtype=float)
        return cls(grid, vals)

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "GridField":
        return cls(grid, np.full(grid.points.shape, float(value)))


def threshold_sublevel(field: GridField, tau: float) -> SetLike:
    """Grid points whose field value is strictly below ``tau``."""
    mask = field.values < tau
    origin = field.grid.descriptor()
    if not mask.any():
        return EmptyResult(origin=origin, threshold=float(tau))
    # grid points are distinct by construction; skip the tolerance pass
    out = CompactSet.__new__(CompactSet)
    object.__setattr__(out, "points", field.grid.points[mask].copy())
    object.__setattr__(out, "origin", origin)
    return out

