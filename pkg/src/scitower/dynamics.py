"""Circle maps on X = [0, 1) and the point-evaluation oracle.

The domain carries the wrap metric ``d(x, y) = min(|x - y|, 1 - |x - y|)``.
Every map evaluation made by an algorithm goes through :func:`evaluate`, which
appends the query and its answer to a :class:`Transcript`.
"""
from __future__ import annotations

import bisect
import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainViolation

__all__ = [
    "DynamicalMap", "Transcript", "ModulusVerdict", "evaluate", "encode",
    "wrap_distance", "check_modulus", "rotation", "doubling", "identity",
    "affine_piecewise", "constant", "user_map", "load_piecewise_csv", "parse_map",
    "agree_on_samples",
]


def wrap_distance(x: float, y: float) -> float:
    d = abs(x - y) % 1.0
    return min(d, 1.0 - d)


def _mod1(v: float) -> float:
    r = v % 1.0
    # float modulo can round a tiny negative up to exactly 1.0
    return 0.0 if r >= 1.0 else r


@dataclass
class Transcript:
    """Append-only record of ``(query point, returned value)`` pairs."""

    entries: list = field(default_factory=list)

    def record(self, x: float, y: float) -> None:
        self.entries.append((x, y))

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def queries(self) -> list[float]:
        return [x for x, _ in self.entries]


@dataclass(frozen=True, eq=False)
class DynamicalMap:
    """A continuous self-map of the circle plus its declared class flags.

    ``lipschitz`` is the declared linear modulus ``alpha(t) = L t`` (None if
    no modulus is declared).  ``measure_preserving`` is a declaration; it is
    not verified from point values.
    """

    kind: str
    params: tuple = ()
    lipschitz: Optional[float] = None
    measure_preserving: bool = False
    evaluator: Optional[Callable[[float], float]] = field(default=None, repr=False)

    def __call__(self, x: float) -> float:
        if self.kind == "rotation":
            return _mod1(x + self.params[1])
        if self.kind == "doubling":
            return _mod1(2.0 * x)
        if self.kind == "identity":
            return x
        if self.kind == "affine-piecewise":
            breaks, slopes, offsets = self.params
            k = bisect.bisect_right(breaks, x) - 1
            return _mod1(slopes[k] * x + offsets[k])
        y = float(self.evaluator(x))
        if not 0.0 <= y < 1.0:
            raise DomainViolation(f"map {self.describe()} returned {y!r} outside [0, 1)")
        return y

    def describe(self) -> str:
        if self.kind == "rotation":
            return f"rotation:{self.params[0]}"
        if self.kind == "affine-piecewise":
            return f"affine-piecewise[{len(self.params[0])}]"
        if self.kind == "user":
            return f"user:{self.params[0] if self.params else 'anonymous'}"
        return self.kind


def rotation(a) -> DynamicalMap:
    a = Fraction(a) % 1
    return DynamicalMap("rotation", (a, float(a)), lipschitz=1.0, measure_preserving=True)


def doubling() -> DynamicalMap:
    return DynamicalMap("doubling", (), lipschitz=2.0, measure_preserving=True)


def identity() -> DynamicalMap:
    return DynamicalMap("identity", (), lipschitz=1.0, measure_preserving=True)


def affine_piecewise(rows: Sequence[tuple], lipschitz=None,
                     measure_preserving: bool = False) -> DynamicalMap:
    """Map ``x -> slope * x + offset (mod 1)`` on ``[breakpoint_k, breakpoint_{k+1})``.

    The first breakpoint must be 0 and breakpoints must increase.
    """
    rows = sorted((float(b), float(s), float(o)) for b, s, o in rows)
    if not rows or rows[0][0] != 0.0:
        raise ValueError("piecewise table must start at breakpoint 0")
    breaks = tuple(r[0] for r in rows)
    if any(b >= 1.0 for b in breaks) or len(set(breaks)) != len(breaks):
        raise ValueError("breakpoints must be distinct and lie in [0, 1)")
    return DynamicalMap("affine-piecewise",
                        (breaks, tuple(r[1] for r in rows), tuple(r[2] for r in rows)),
                        lipschitz=lipschitz, measure_preserving=measure_preserving)


def constant(c: float = 0.0) -> DynamicalMap:
    return affine_piecewise([(0.0, 0.0, c)], lipschitz=0.0)


def user_map(fn: Callable[[float], float], name: str = "anonymous", lipschitz=None,
             measure_preserving: bool = False) -> DynamicalMap:
    return DynamicalMap("user", (name,), lipschitz=lipschitz,
                        measure_preserving=measure_preserving, evaluator=fn)


def load_piecewise_csv(text: str, **flags) -> DynamicalMap:
    """Parse ``breakpoint,slope,offset`` rows (an optional header is skipped)."""
    rows = []
    for r in csv.reader(io.StringIO(text)):
        if not r or r[0].strip().startswith("#"):
            continue
        try:
            rows.append(tuple(float(Fraction(c.strip())) for c in r[:3]))
        except ValueError:
            if rows:
                raise
    return affine_piecewise(rows, **flags)


def parse_map(descriptor: str) -> DynamicalMap:
    """Build a map from ``rotation:1/4``, ``doubling``, ``identity``,
    ``constant:0`` or ``piecewise:<csv path>``."""
    kind, _, arg = descriptor.partition(":")
    kind = kind.strip().lower()
    if kind == "rotation":
        if not arg:
            raise ValueError("rotation needs an angle, e.g. rotation:1/4")
        return rotation(Fraction(arg))
    if kind == "doubling" and not arg:
        return doubling()
    if kind == "identity" and not arg:
        return identity()
    if kind == "constant":
        return constant(float(Fraction(arg or "0")) % 1.0)
    if kind == "piecewise":
        with open(arg) as fh:
            return load_piecewise_csv(fh.read())
    raise ValueError(f"unknown map descriptor {descriptor!r}")


def evaluate(F: DynamicalMap, x: float, t: Optional[Transcript] = None) -> float:
    """Query ``F(x)`` and log the pair in ``t``."""
    if not 0.0 <= x < 1.0:
        raise DomainViolation(f"query point {x!r} outside [0, 1)")
    y = F(x)
    if t is not None:
        t.record(x, y)
    return y


def encode(x: float) -> complex:
    """Injective embedding of the circle coordinate into C."""
    return complex(x, 0.0)


def agree_on_samples(F: DynamicalMap, samples, shift: float = 0.5) -> DynamicalMap:
    """A map equal to ``F`` on ``samples`` and shifted by ``shift`` elsewhere."""
    keep = frozenset(float(s) for s in samples)

    def g(x):
        y = F(x)
        return y if x in keep else _mod1(y + shift)

    return user_map(g, name=f"{F.describe()}~off-sample", lipschitz=None,
                    measure_preserving=F.measure_preserving)


@dataclass(frozen=True)
class ModulusVerdict:
    passed: bool
    witness: Optional[tuple] = None


def check_modulus(F: DynamicalMap, L: float, trials: int = 1000, seed: int = 0) -> ModulusVerdict:
    """Sample pairs and test ``d(F x, F y) <= L d(x, y) + 1e-12``."""
    if not L > 0:
        raise ValueError("modulus bound must be positive")
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    xs = rng.random(trials)
    # half the pairs are local so that expanding maps get caught
    local = rng.random(trials) < 0.5
    ys = np.where(local, (xs + rng.uniform(-0.05, 0.05, trials)) % 1.0, rng.random(trials))
    for x, y in zip(xs.tolist(), ys.tolist()):
        y = _mod1(y)
        if wrap_distance(F(x), F(y)) > L * wrap_distance(x, y) + 1e-12:
            return ModulusVerdict(False, (x, y))
    return ModulusVerdict(True)
