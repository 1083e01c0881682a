from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import sign
from scitower import baire


def test_pair_examples():
    assert baire.pair(0, 0) == 0
    assert baire.unpair(baire.pair(7, 11)) == (7, 11)


def test_pair_injective_exhaustive():
    codes = {baire.pair(n, k) for n in range(100) for k in range(100)}
    assert len(codes) == 10_000


@given(st.integers(0, 10 ** 12), st.integers(0, 10 ** 12))
def test_pair_round_trip(n, k):
    assert baire.unpair(baire.pair(n, k)) == (n, k)


@given(st.integers(0, 10 ** 15))
def test_unpair_round_trip(m):
    assert baire.pair(*baire.unpair(m)) == m


def test_pair_rejects_negatives():
    with pytest.raises(ValueError):
        baire.pair(-1, 0)
    with pytest.raises(ValueError):
        baire.unpair(-1)


def test_stage_family_name_views_agree():
    p = baire.StageFamily(lambda n, k: 3 * n + k)
    q = baire.StageFamily.from_name(p.name)
    assert all(q(n, k) == p(n, k) for n in range(20) for k in range(20))


def test_lim_at_constant():
    v = baire.lim_at(lambda n, k: 42, 0, 100)
    assert (v.stabilized, v.value, v.last_change, v.changes) == (True, 42, 0, 0)


def test_lim_at_step():
    v = baire.lim_at(lambda n, k: 1 if n >= k else 0, 5, 100)
    assert (v.stabilized, v.value, v.last_change) == (True, 1, 5)


def test_lim_at_alternating():
    v = baire.lim_at(lambda n, k: n % 2, 0, 100)
    assert not v.stabilized and v.provisional
    assert v.changes == 100 and v.value == 0


def test_lim_at_verdict_carries_budget_and_tail():
    v = baire.lim_at(lambda n, k: 0, 0, 40)
    assert (v.budget, v.tail) == (40, 10)
    with pytest.raises(ValueError):
        baire.lim_at(lambda n, k: 0, 0, 3, tail=5)
    with pytest.raises(ValueError):
        baire.lim_at(lambda n, k: 0, 0, 3, tail=0)


def test_lim_at_late_change_is_not_stabilized():
    v = baire.lim_at(lambda n, k: 1 if n >= 95 else 0, 0, 100)
    assert not v.stabilized and v.value == 1 and v.last_change == 95


@given(st.integers(0, 50), st.integers(0, 200), st.integers(1, 10))
def test_lim_at_budget_monotone(s, extra, tail):
    p = lambda n, k: 7 if n >= s else n  # noqa: E731
    B = s + tail
    v = baire.lim_at(p, 0, B, tail)
    assert v.stabilized
    w = baire.lim_at(p, 0, B + extra, tail)
    assert w.stabilized and w.value == v.value


@given(st.lists(st.integers(0, 3), min_size=1, max_size=60), st.integers(1, 10))
def test_lim_at_stabilized_means_constant_after_last_change(values, tail):
    B = len(values) - 1
    if tail > B:
        tail = max(1, B)
    if B < 1:
        return
    v = baire.lim_at(lambda n, k: values[n], 0, B, tail)
    assert all(values[n] == v.value for n in range(v.last_change, B + 1))
    assert v.changes == sum(values[i] != values[i - 1] for i in range(1, B + 1))
    assert v.stabilized == (B - v.last_change + 1 >= tail)


def test_lim_k_height_zero_is_identity():
    name = lambda k: k * k - 3  # noqa: E731
    out = baire.lim_k(name, 0, 50)
    assert [v.value for v in out] == [name(k) for k in range(50)]
    assert all(v.stabilized for v in out)


def test_lim_k_doubly_constant():
    out = baire.lim_k(lambda n2, n1, k: 9, 2, 4, budgets=20)
    assert all(v.stabilized and v.value == 9 for v in out)


def test_lim_k_two_level_step():
    p = lambda n2, n1, k: 1 if n1 >= k and n2 >= k else 0  # noqa: E731
    out = baire.lim_k(p, 2, 6, budgets=24)
    assert all(v.stabilized and v.value == 1 for v in out)


def test_lim_k_inner_failure_propagates():
    p = lambda n2, n1, k: n1 % 2 if k == 1 else 0  # noqa: E731
    out = baire.lim_k(p, 2, 3, budgets=12)
    assert [v.stabilized for v in out] == [True, False, True]


def test_lim_k_rejects_bad_levels():
    with pytest.raises(ValueError):
        baire.lim_k(lambda k: k, -1, 3)
    with pytest.raises(ValueError):
        baire.lim_k(lambda a, b, k: 0, 2, 3, budgets=[8])


def test_fmc_sign_examples():
    run = baire.fmc_run(baire.sign_stage, baire.cauchy_name(-1), 30)
    assert run.value == -1 and run.changes <= 1 and not run.provisional
    run = baire.fmc_run(baire.sign_stage, baire.cauchy_name(0), 30)
    assert run.value == 0 and run.changes == 0 and run.provisional


def test_fmc_sign_small_input_is_provisional():
    run = baire.fmc_run(baire.sign_stage, baire.cauchy_name(Fraction(1, 2 ** 10)), 5)
    assert run.value == 0 and run.provisional
    run = baire.fmc_run(baire.sign_stage, baire.cauchy_name(Fraction(1, 2 ** 10)), 11)
    assert run.value == 1 and not run.provisional and run.changes == 1


@given(st.fractions().filter(lambda q: q != 0 and abs(q.numerator) < 10 ** 6
                             and q.denominator < 10 ** 6))
def test_fmc_sign_matches_exact(q):
    run = baire.fmc_run(baire.sign_stage, baire.cauchy_name(q), 64)
    assert run.value == sign(q) and run.changes <= 1


def test_fmc_change_count_matches_trace():
    run = baire.fmc_run(lambda name, s: (s // 3) % 2, None, 20)
    assert run.changes == sum(a != b for a, b in zip(run.trace, run.trace[1:]))
    assert run.provisional


def test_trace_csv():
    assert baire.trace_csv([0, 1, 1]) == "stage,value\n0,0\n1,1\n2,1\n"
