import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (dist_to_set, doubling_koopman, koopman_entries, lattice,
                     rotation_koopman)
from scitower import dynamics as dy
from scitower.errors import NyquistViolation
from scitower.hyperspace import EmptyResult, threshold_sublevel
from scitower.koopman import (Dictionary, assemble_matrix, default_sizer, gamma_base,
                              gamma_stabilized, matched_schedule, min_level, residual,
                              residual_field, run_tower)


def as_set(S):
    return set(S.points.tolist())


@pytest.mark.parametrize("F, expected", [
    (dy.identity(), np.eye(3)),
    (dy.rotation("1/2"), np.diag([-1, 1, -1])),
    (dy.constant(0.0), np.array([[0, 0, 0], [1, 1, 1], [0, 0, 0]])),
])
def test_assemble_examples(F, expected):
    K = assemble_matrix(F, Dictionary(1, 1), 3)
    assert np.max(np.abs(K.A - expected)) < 1e-12


@pytest.mark.parametrize("F", [dy.doubling(), dy.rotation("1/3"),
                               dy.affine_piecewise([(0, 3, 0.1), (0.4, -1, 0.7)])])
def test_assembly_matches_entrywise_loop(F):
    K = assemble_matrix(F, Dictionary(2, 4), 4)
    assert np.max(np.abs(K.A - np.array(koopman_entries(F, 2, 4, 4)))) < 1e-12


def test_assembly_matches_analytic_truncations():
    K = assemble_matrix(dy.rotation("1/3"), Dictionary(4, 8), 5)
    assert np.max(np.abs(K.A - np.array(rotation_koopman(1 / 3, 4, 8)))) < 1e-12
    K = assemble_matrix(dy.doubling(), Dictionary(4, 8), 5)
    assert np.max(np.abs(K.A - np.array(doubling_koopman(4, 8)))) < 1e-12


def test_assembly_queries_each_sample_once():
    t = dy.Transcript()
    assemble_matrix(dy.doubling(), Dictionary(1, 2), 4, t)
    assert len(t) == 16
    assert len(set(t.queries)) == 16


def test_nyquist_guard():
    with pytest.raises(NyquistViolation):
        assemble_matrix(dy.identity(), Dictionary(2, 4), 3)
    assert min_level(Dictionary(8, 16)) == 6
    assert Dictionary(8, 16).admits(6) and not Dictionary(8, 16).admits(5)


def test_entries_bounded_by_one():
    rng = np.random.default_rng(3)
    for _ in range(5):
        F = dy.user_map(lambda x, s=rng.random(): (x * x + s) % 1.0)
        K = assemble_matrix(F, Dictionary(3, 6), 5)
        assert np.max(np.abs(K.A)) <= 1 + 1e-9


def test_residual_examples():
    assert residual(np.eye(3), 0) == pytest.approx(1, abs=1e-12)
    assert residual(np.diag([1.0, -1.0]), 1) == pytest.approx(0, abs=1e-12)


def test_residual_equals_smallest_singular_value():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(7, 3)) + 1j * rng.normal(size=(7, 3))
    E = np.zeros((7, 3))
    E[[2, 3, 4], [0, 1, 2]] = 1
    for z in (0, 0.3 - 0.2j, 2j):
        direct = np.linalg.svd(A - z * E, compute_uv=False).min()
        assert residual(A, z) == pytest.approx(direct, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.complex_numbers(max_magnitude=3),
       st.complex_numbers(max_magnitude=3))
def test_residual_is_one_lipschitz(seed, z, w):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
    assert abs(residual(A, z) - residual(A, w)) <= abs(z - w) + 1e-12


def test_gamma_base_rotation_half():
    d = Dictionary.for_index(8)
    out = gamma_base(dy.rotation("1/2"), d, 0.4, 8, 6)
    expected = {z for z in lattice(8, 2) if dist_to_set(z, [1, -1]) < 0.4 - 1 / 8}
    assert as_set(out) == expected


def test_gamma_base_identity():
    out = gamma_base(dy.identity(), Dictionary.for_index(8, 1), 0.4, 8, 6)
    expected = {z for z in lattice(8, 2) if abs(1 - z) < 0.275}
    assert as_set(out) == expected


def test_gamma_base_empty_when_nothing_passes():
    # rotation by 1/2 has spectrum {1, -1}; a small window around 0 stays far from it
    out = gamma_base(dy.rotation("1/2"), Dictionary(2, 4), 0.05, 10, 4, half_width=0.3)
    assert isinstance(out, EmptyResult)
    assert not out and len(out) == 0


def test_gamma_base_equals_threshold_of_field():
    F = dy.rotation("1/5")
    d = Dictionary.for_index(6)
    fld = residual_field(F, d, 6, 5)
    a, b = gamma_base(F, d, 0.35, 6, 5), threshold_sublevel(fld, 0.35 - 1 / 6)
    assert np.array_equal(a.points, b.points)


def test_gamma_stabilized_single_level():
    d = Dictionary(0, 0)
    F = dy.rotation("1/3")
    a = gamma_stabilized(F, d, 0.6, 4, 1)
    b = gamma_base(F, d, 0.6, 4, 1)
    assert np.array_equal(a.points, b.points)


def test_gamma_stabilized_rotation_levels_agree():
    d = Dictionary(3, 6)
    outs = [as_set(gamma_stabilized(dy.rotation("1/2"), d, 0.4, 8, n1)) for n1 in (4, 5, 6)]
    assert outs[0] == outs[1] == outs[2]


def test_gamma_stabilized_monotone_in_n1():
    F = dy.affine_piecewise([(0, 3, 0.2), (0.5, 1, 0.1)])
    d = Dictionary(2, 3)
    prev = set()
    for n1 in range(3, 8):
        cur = as_set(gamma_stabilized(F, d, 0.5, 6, n1))
        assert prev <= cur
        prev = cur


def test_gamma_stabilized_queries_cumulative_samples():
    t = dy.Transcript()
    gamma_stabilized(dy.doubling(), Dictionary(1, 2), 0.5, 4, 5, transcript=t)
    assert len(t) == 2 + 4 + 8 + 16 + 32


def test_residual_field_minima_at_nearest_grid_points():
    d = Dictionary.for_index(4)
    fld = residual_field(dy.rotation("1/4"), d, 4, min_level(d))
    roots = [1, 1j, -1, -1j]
    oracle = np.array([dist_to_set(z, roots) for z in fld.grid.points.tolist()])
    assert np.max(np.abs(fld.values - oracle)) < 1e-12
    assert np.argmin(fld.values) in np.flatnonzero(oracle == oracle.min())


def test_residual_field_nonnegative_and_lipschitz_on_grid():
    d = Dictionary.for_index(6)
    fld = residual_field(dy.doubling(), d, 6, min_level(d))
    assert (fld.values >= 0).all()
    g = fld.grid
    side = 2 * g.radius_index + 1
    v = fld.values.reshape(side, side)
    h = g.spacing
    assert np.max(np.abs(np.diff(v, axis=0))) <= h + 1e-12
    assert np.max(np.abs(np.diff(v, axis=1))) <= h + 1e-12


def test_fixed_query_transcript_length():
    for n2, n1 in [(3, 4), (5, 5), (8, 6)]:
        t = dy.Transcript()
        gamma_base(dy.doubling(), Dictionary.for_index(n2), 0.3, n2, n1, transcript=t)
        assert len(t) == 2 ** n1


def test_isometry_floor_doubling():
    d = Dictionary(8, 16)
    fld = residual_field(dy.doubling(), d, 8, 6)
    z = fld.grid.points
    assert np.all(fld.values >= np.abs(1 - np.abs(z)) - 1e-12)


def test_run_tower_rotation_quarter():
    run = run_tower(dy.rotation("1/4"), None, 0.3, matched_schedule([4, 8, 16]))
    assert len(run.distances) == 2
    roots = [1, 1j, -1, -1j]
    assert all(dist_to_set(z, roots) < 0.3 - 1 / 16 for z in run.final.points.tolist())


def test_run_tower_identity_concentrates_at_one():
    run = run_tower(dy.identity(), None, 0.3, matched_schedule([4, 8, 16]))
    assert all(abs(z - 1) < 0.3 for st in run.stages for z in st.points.tolist())
    assert len(run.final) > 0


def test_run_tower_skips_empty_stages():
    run = run_tower(dy.rotation("1/2"), default_sizer(), 0.2, [(4, 5), (8, 6)])
    assert isinstance(run.stages[0], EmptyResult)
    assert run.distances == [None]
    assert run.notes


def test_run_tower_rejects_bad_schedules():
    with pytest.raises(ValueError):
        run_tower(dy.identity(), None, 0.3, [])
    with pytest.raises(ValueError):
        run_tower(dy.identity(), None, 0.3, [(8, 6), (4, 5)])
    with pytest.raises(ValueError):
        run_tower(dy.identity(), None, -0.3, [(4, 5)])


def test_run_tower_product_schedule():
    run = run_tower(dy.rotation("1/4"), lambda n: Dictionary(1, 2), 0.4, ([2, 4], [3, 4]),
                    stabilized=False)
    assert run.schedule == [(2, 3), (2, 4), (4, 3), (4, 4)]
    assert len(run.distances) == 3
