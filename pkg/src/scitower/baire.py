"""Baire-space names, the limit operator and its iterates at finite budgets.

Naturals are 0-based throughout; shift by +1 to match a 1-based convention.
Membership in the domain of ``lim`` is undecidable, so every verdict here is
a report about the stages actually inspected and carries its budget.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence, Union

__all__ = [
    "pair", "unpair", "StageFamily", "LimVerdict", "lim_at", "lim_k",
    "MindChangeRun", "StageValue", "fmc_run", "sign_stage", "cauchy_name",
    "trace_csv", "default_tail",
]


def pair(n: int, k: int) -> int:
    """Cantor pairing ``(n + k)(n + k + 1)/2 + k``."""
    if n < 0 or k < 0:
        raise ValueError("pairing is defined on naturals")
    s = n + k
    return s * (s + 1) // 2 + k


def unpair(m: int) -> tuple[int, int]:
    if m < 0:
        raise ValueError("pairing is defined on naturals")
    s = (math.isqrt(8 * m + 1) - 1) // 2
    k = m - s * (s + 1) // 2
    return s - k, k


@dataclass(frozen=True)
class StageFamily:
    """Stage-indexed family ``(n, k) -> p_n(k)``.

    Equivalently a single name ``p`` with ``p(<n, k>) = p_n(k)``; see
    :meth:`name` and :meth:`from_name`.
    """

    generator: Callable[[int, int], Any]

    def __call__(self, n: int, k: int):
        return self.generator(n, k)

    def name(self, m: int):
        return self.generator(*unpair(m))

    @classmethod
    def from_name(cls, p: Callable[[int], Any]) -> "StageFamily":
        return cls(lambda n, k: p(pair(n, k)))


def default_tail(budget: int) -> int:
    return max(1, budget // 4)


@dataclass(frozen=True)
class LimVerdict:
    coordinate: int
    stabilized: bool
    value: Any
    last_change: int
    changes: int
    budget: int
    tail: int

    @property
    def provisional(self) -> bool:
        return not self.stabilized


def _scan(values: Sequence) -> tuple[int, int]:
    """Return (start of the final constant run, number of changes)."""
    last, changes = 0, 0
    for s in range(1, len(values)):
        if values[s] != values[s - 1]:
            changes += 1
            last = s
    return last, changes


def lim_at(p, k: int, budget: int, tail: Optional[int] = None) -> LimVerdict:
    """Inspect ``p_n(k)`` for ``n = 0..budget``.

    Stabilized means the final constant run starts at ``last_change`` and is
    at least ``tail`` stages long.
    """
    tail = default_tail(budget) if tail is None else tail
    if not budget >= tail >= 1:
        raise ValueError(f"need budget >= tail >= 1, got budget={budget}, tail={tail}")
    values = [p(n, k) for n in range(budget + 1)]
    last, changes = _scan(values)
    run = budget - last + 1
    return LimVerdict(coordinate=k, stabilized=run >= tail, value=values[-1],
                      last_change=last, changes=changes, budget=budget, tail=tail)


def lim_k(p: Callable[..., Any], h: int, coordinates: Union[int, Sequence[int]],
          budgets: Union[int, Sequence[int]] = 64,
          tails: Union[None, int, Sequence[Optional[int]]] = None) -> list[LimVerdict]:
    """Evaluate ``lim^(h)`` coordinatewise.

    ``p(n_h, ..., n_1, k)`` takes ``h`` stage indices, outermost first.
    The innermost index ``n_1`` is limited first.  A coordinate whose inner
    limit fails to stabilize for any inspected outer stage is reported as
    not stabilized.  ``budgets`` and ``tails`` are per level, outermost
    first, or a single value for every level.
    """
    if h < 0:
        raise ValueError("height must be nonnegative")
    coords = range(coordinates) if isinstance(coordinates, int) else list(coordinates)
    if h == 0:
        return [LimVerdict(k, True, p(k), 0, 0, 0, 0) for k in coords]
    bs = [budgets] * h if isinstance(budgets, int) else list(budgets)
    ts = [tails] * h if tails is None or isinstance(tails, int) else list(tails)
    if len(bs) != h or len(ts) != h:
        raise ValueError("need one budget and tail per level")

    def level(prefix: tuple, k: int) -> LimVerdict:
        depth = len(prefix)
        if depth == h - 1:
            return lim_at(lambda n, kk: p(*prefix, n, kk), k, bs[depth], ts[depth])
        inner_ok = [True]

        def g(n, kk):
            v = level(prefix + (n,), kk)
            if not v.stabilized:
                inner_ok[0] = False
            return v.value

        v = lim_at(g, k, bs[depth], ts[depth])
        if not inner_ok[0]:
            v = LimVerdict(v.coordinate, False, v.value, v.last_change, v.changes,
                           v.budget, v.tail)
        return v

    return [level((), k) for k in coords]


@dataclass(frozen=True)
class StageValue:
    """A stage output that may also certify it will never change again."""

    value: Any
    certified: bool = False


@dataclass
class MindChangeRun:
    value: Any
    changes: int
    trace: list = field(default_factory=list)
    provisional: bool = True


def fmc_run(phi: Callable[[Any, int], Any], name: Any, budget: int) -> MindChangeRun:
    """Run a stage procedure for stages ``0..budget`` and count value changes.

    A run is provisional unless its final stage returned a certified
    :class:`StageValue`.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    trace, certified = [], False
    for s in range(budget + 1):
        out = phi(name, s)
        if isinstance(out, StageValue):
            trace.append(out.value)
            certified = out.certified
        else:
            trace.append(out)
            certified = False
    _, changes = _scan(trace)
    return MindChangeRun(value=trace[-1], changes=changes, trace=trace,
                         provisional=not certified)


def cauchy_name(x) -> Callable[[int], Fraction]:
    """Canonical name of a rational: the constant approximant sequence."""
    q = Fraction(x)
    return lambda s: q


def sign_stage(name: Callable[[int], Fraction], s: int) -> StageValue:
    """Sign by approximation: nonzero once ``|q_s| > 2**-s``.

    With ``|x - q_s| <= 2**-s`` a nonzero answer is already correct, so it
    is certified; a zero answer never is.
    """
    q = Fraction(name(s))
    if abs(q) > Fraction(1, 2 ** s):
        return StageValue(1 if q > 0 else -1, certified=True)
    return StageValue(0, certified=False)


def trace_csv(trace: Sequence) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["stage", "value"])
    for s, v in enumerate(trace):
        w.writerow([s, v])
    return buf.getvalue()
