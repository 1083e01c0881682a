"""Finite arithmetic decision trees and their fibers.

Internal nodes test ``r_i(y) < q`` or ``r_i(y) <= q`` for a rational ``q``;
leaves carry labels.  The fiber of a label is the disjunction of the
root-to-leaf paths ending in that label, each path a conjunction of
(possibly negated) threshold tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence, Union


@dataclass(frozen=True)
class Leaf:
    label: Any


@dataclass(frozen=True)
class Test:
    fn: int
    op: str
    q: Fraction
    if_true: "Node"
    if_false: "Node"

    def __post_init__(self):
        if self.op not in ("<", "<="):
            raise ValueError(f"test operator must be '<' or '<=', got {self.op!r}")
        object.__setattr__(self, "q", Fraction(self.q))

    def holds(self, tests: Sequence[Callable], y) -> bool:
        v = tests[self.fn](y)
        return v < self.q if self.op == "<" else v <= self.q


Node = Union[Leaf, Test]


@dataclass(frozen=True)
class Literal:
    fn: int
    op: str
    q: Fraction
    positive: bool

    def holds(self, tests: Sequence[Callable], y) -> bool:
        v = tests[self.fn](y)
        t = v < self.q if self.op == "<" else v <= self.q
        return t if self.positive else not t

    def __str__(self):
        s = f"r{self.fn}(y) {self.op} {self.q}"
        return s if self.positive else f"not({s})"


@dataclass(frozen=True)
class FiberFormula:
    """Disjunction of conjunctions of threshold literals."""

    label: Any
    clauses: tuple

    def holds(self, tests: Sequence[Callable], y) -> bool:
        return any(all(lit.holds(tests, y) for lit in clause) for clause in self.clauses)

    def __str__(self):
        if not self.clauses:
            return "false"
        return " or ".join("(" + (" and ".join(map(str, c)) or "true") + ")"
                           for c in self.clauses)


def _check_refs(tree: Node, n_tests: int) -> None:
    if isinstance(tree, Test):
        if not 0 <= tree.fn < n_tests:
            raise ValueError(f"tree references undeclared test function r{tree.fn}")
        _check_refs(tree.if_true, n_tests)
        _check_refs(tree.if_false, n_tests)


def decision_tree_eval(tree: Node, tests: Sequence[Callable], y):
    _check_refs(tree, len(tests))
    node = tree
    while isinstance(node, Test):
        node = node.if_true if node.holds(tests, y) else node.if_false
    return node.label


def fiber_formula(tree: Node, label) -> FiberFormula:
    clauses = []

    def walk(node, path):
        if isinstance(node, Leaf):
            if node.label == label:
                clauses.append(tuple(path))
            return
        walk(node.if_true, path + [Literal(node.fn, node.op, node.q, True)])
        walk(node.if_false, path + [Literal(node.fn, node.op, node.q, False)])

    walk(tree, [])
    return FiberFormula(label, tuple(clauses))


def leaves(tree: Node) -> list:
    if isinstance(tree, Leaf):
        return [tree.label]
    return leaves(tree.if_true) + leaves(tree.if_false)


def sign_tree() -> Node:
    """Depth-2 sign: ``y < 0 -> -1``, else ``y <= 0 -> 0``, else ``1``."""
    return Test(0, "<", Fraction(0), Leaf(-1), Test(0, "<=", Fraction(0), Leaf(0), Leaf(1)))
