"""Finite computational problems checked by brute force.

A finite problem has inputs ``0..|omega|-1`` (with display labels), a
solution table ``xi`` and evaluation tables ``lam[f][a]``.  All properties
checked here quantify over input pairs, so everything is exhaustive.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from ..errors import FactorizationImpossible, NotFactorable

__all__ = [
    "FiniteProblem", "ConsistencyVerdict", "Factorization", "QueryPolicy",
    "AlgorithmVerdict", "HeightZeroAlgorithm", "check_consistency", "factorize",
    "check_general_algorithm", "check_pairs", "finite_query_factorization",
    "random_problem", "inseparable_pair_problem", "separates_fibers",
]


def _scalar(v):
    """JSON-friendly form of a table entry (complex -> [re, im] if needed)."""
    if isinstance(v, complex):
        return v.real if v.imag == 0 else [v.real, v.imag]
    return v


def _parse_entry(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    if isinstance(v, dict):
        return complex(v.get("re", 0), v.get("im", 0))
    return complex(v)


@dataclass
class FiniteProblem:
    omega: list
    xi: list
    lam: list
    metric: Any = "discrete"

    def __post_init__(self):
        n = len(self.omega)
        if len(self.xi) != n:
            raise ValueError(f"xi has {len(self.xi)} entries for {n} inputs")
        for idx, f in enumerate(self.lam):
            if len(f) != n:
                raise ValueError(f"evaluation {idx} has {len(f)} entries for {n} inputs")
        self.lam = [[complex(v) for v in f] for f in self.lam]

    def __len__(self) -> int:
        return len(self.omega)

    def row(self, a: int, columns: Optional[Sequence[int]] = None) -> tuple:
        cols = range(len(self.lam)) if columns is None else columns
        return tuple(self.lam[f][a] for f in cols)

    def distance(self, u, v) -> float:
        if self.metric == "discrete":
            return 0.0 if u == v else 1.0
        values = sorted(set(map(_key, self.xi)))
        return float(self.metric[values.index(_key(u))][values.index(_key(v))])

    @classmethod
    def from_dict(cls, doc: dict) -> "FiniteProblem":
        try:
            omega = list(doc["omega"])
            xi = [_freeze(v) for v in doc["xi"]]
            lam = [[_parse_entry(v) for v in f] for f in doc.get("lambda", [])]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed problem document: {exc}") from exc
        return cls(omega=omega, xi=xi, lam=lam, metric=doc.get("metric", "discrete"))

    @classmethod
    def from_json(cls, text: str) -> "FiniteProblem":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {"omega": self.omega, "xi": [_thaw(v) for v in self.xi],
                "lambda": [[_scalar(v) for v in f] for f in self.lam],
                "metric": self.metric}


def _freeze(v):
    return tuple(_freeze(x) for x in v) if isinstance(v, list) else v


def _thaw(v):
    return [_thaw(x) for x in v] if isinstance(v, tuple) else v


def _key(v):
    return json.dumps(_thaw(v), sort_keys=True)


@dataclass(frozen=True)
class ConsistencyVerdict:
    holds: bool
    witness: Optional[tuple] = None

    def to_dict(self) -> dict:
        return {"status": "holds" if self.holds else "fails",
                "witness": list(self.witness) if self.witness else None}


def check_consistency(P: FiniteProblem) -> ConsistencyVerdict:
    """Distinct solutions must be separated by some evaluation."""
    n = len(P)
    for a in range(n):
        for b in range(a + 1, n):
            if P.xi[a] != P.xi[b] and P.row(a) == P.row(b):
                return ConsistencyVerdict(False, (a, b))
    return ConsistencyVerdict(True)


@dataclass
class Factorization:
    """``phi`` maps each realised evaluation row to its solution value."""

    phi: dict
    columns: tuple

    def __call__(self, row: tuple):
        return self.phi[tuple(row)]

    def to_dict(self) -> dict:
        return {"columns": list(self.columns),
                "phi": [{"row": [_scalar(v) for v in r], "value": _thaw(val)}
                        for r, val in self.phi.items()]}


def _group(P: FiniteProblem, columns: Sequence[int]) -> tuple[dict, Optional[tuple]]:
    """Map each evaluation row to its solution; also return a clash, if any."""
    phi, first = {}, {}
    for a in range(len(P)):
        r = P.row(a, columns)
        if r not in phi:
            phi[r] = P.xi[a]
            first[r] = a
        elif phi[r] != P.xi[a]:
            return phi, (first[r], a)
    return phi, None


def factorize(P: FiniteProblem) -> Factorization:
    """Return ``phi`` with ``xi = phi o Ev``; raise if no such map exists."""
    cols = tuple(range(len(P.lam)))
    phi, clash = _group(P, cols)
    if clash:
        # report the same pair check_consistency would
        raise FactorizationImpossible(check_consistency(P).witness)
    fac = Factorization(phi=phi, columns=cols)
    bad = [a for a in range(len(P)) if fac(P.row(a)) != P.xi[a]]
    if bad:
        raise RuntimeError(f"induced map disagrees with xi on inputs {bad}")
    return fac


@dataclass(frozen=True)
class QueryPolicy:
    """Per-input finite query sets; ``mode`` is ``fixed`` or ``adaptive``."""

    sets: tuple
    mode: str

    def __post_init__(self):
        if self.mode not in ("fixed", "adaptive"):
            raise ValueError(f"unknown query mode {self.mode!r}")
        if self.mode == "fixed" and len(set(self.sets)) > 1:
            raise ValueError("a fixed-query policy must use one query set for all inputs")

    @classmethod
    def fixed(cls, queries: Iterable[int], n_inputs: int) -> "QueryPolicy":
        q = frozenset(queries)
        return cls(tuple([q] * n_inputs), "fixed")

    @classmethod
    def adaptive(cls, sets: Iterable[Iterable[int]]) -> "QueryPolicy":
        return cls(tuple(frozenset(s) for s in sets), "adaptive")

    def __getitem__(self, a: int) -> frozenset:
        return self.sets[a]


@dataclass(frozen=True)
class AlgorithmVerdict:
    status: str
    witness: Optional[tuple] = None

    @property
    def valid(self) -> bool:
        return self.status == "valid"

    def to_dict(self) -> dict:
        return {"status": self.status,
                "witness": list(self.witness) if self.witness else None}


def check_pairs(pairs: Iterable[tuple], gamma: Callable, queries: Callable,
                ev: Callable) -> AlgorithmVerdict:
    """Check both general-algorithm clauses on the given ordered pairs.

    ``queries(A)`` returns the query set used on A and ``ev(q, A)`` the
    answer to query ``q``.  If B answers every query of A as A does, then
    B must get the same output and the same query set.
    """
    for A, B in pairs:
        QA = queries(A)
        if not QA:
            raise ValueError("query sets must be nonempty")
        if all(ev(q, A) == ev(q, B) for q in QA):
            if gamma(B) != gamma(A):
                return AlgorithmVerdict("violates-dependence", (A, B))
            if queries(B) != QA:
                return AlgorithmVerdict("violates-stability", (A, B))
    return AlgorithmVerdict("valid")


def check_general_algorithm(gamma: Sequence, policy: QueryPolicy,
                            P: FiniteProblem) -> AlgorithmVerdict:
    n = len(P)
    if len(gamma) != n or len(policy.sets) != n:
        raise ValueError("algorithm and policy must cover every input")
    return check_pairs(product(range(n), repeat=2), gamma.__getitem__,
                       policy.__getitem__, lambda q, a: P.lam[q][a])


@dataclass
class HeightZeroAlgorithm:
    """Fixed-query algorithm ``G o (f_q)_{q in queries}`` on a finite problem."""

    table: dict
    queries: tuple
    gamma: list
    policy: QueryPolicy

    def __call__(self, row: tuple):
        return self.table[tuple(row)]


def finite_query_factorization(P: FiniteProblem,
                               queries: Sequence[int]) -> HeightZeroAlgorithm:
    """Build ``G`` on the image of the queried columns, if xi factors through it."""
    cols = tuple(dict.fromkeys(int(q) for q in queries))
    if not cols:
        raise ValueError("a general algorithm needs a nonempty query set")
    if any(not 0 <= q < len(P.lam) for q in cols):
        raise ValueError(f"queries {cols} not all within 0..{len(P.lam) - 1}")
    table, clash = _group(P, cols)
    if clash:
        raise NotFactorable(clash)
    gamma = [table[P.row(a, cols)] for a in range(len(P))]
    return HeightZeroAlgorithm(table=table, queries=cols, gamma=gamma,
                               policy=QueryPolicy.fixed(cols, len(P)))


def separates_fibers(P: FiniteProblem, columns: Sequence[int]) -> bool:
    """True when every pair with distinct solutions differs on some column."""
    n = len(P)
    return all(P.xi[a] == P.xi[b] or any(P.lam[c][a] != P.lam[c][b] for c in columns)
               for a in range(n) for b in range(a + 1, n))


def random_problem(rng: np.random.Generator, max_inputs: int = 6, max_evals: int = 4,
                   n_values: int = 3, n_answers: int = 3) -> FiniteProblem:
    """Small random problem; tiny value ranges make collisions common."""
    n = int(rng.integers(1, max_inputs + 1))
    m = int(rng.integers(0, max_evals + 1))
    xi = [int(v) for v in rng.integers(0, n_values, n)]
    lam = [[complex(int(v)) for v in rng.integers(0, n_answers, n)] for _ in range(m)]
    return FiniteProblem(omega=list(range(n)), xi=xi, lam=lam)


def inseparable_pair_problem() -> FiniteProblem:
    """Two inputs, identity solution map, one constant evaluation."""
    return FiniteProblem(omega=[0, 1], xi=[0, 1], lam=[[0j, 0j]])
