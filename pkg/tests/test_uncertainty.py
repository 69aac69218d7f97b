from __future__ import annotations

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rncep import uncertainty as unc
from rncep.lp import vertex_enumerate

from helpers import scen

AB = ("a", "b")


def matrices(min_rows=1, max_rows=8, max_cols=4, zeros=True):
    elems = st.one_of(st.just(0.0), st.floats(0.01, 100.0)) if zeros else st.floats(0.01, 100.0)
    return st.tuples(st.integers(min_rows, max_rows), st.integers(1, max_cols)).flatmap(
        lambda s: arrays(np.float64, s, elements=elems))


def as_set(D):
    return scen([(f"s{k}", f"t{k}") for k in range(D.shape[1])], D)


# -- split / top-K ------------------------------------------------------------------

def test_split_definition():
    R = scen([AB], [[i] for i in range(5)])
    tr, ev = unc.split_train_eval(R, 2)
    assert tr.demands.ravel().tolist() == [0, 2, 4]
    assert ev.demands.ravel().tolist() == [1, 3]
    tr, ev = unc.split_train_eval(R, 1)
    assert tr == R and ev.num_scenarios == 0


def test_split_288_by_12():
    R = scen([AB], np.zeros((288, 1)))
    tr, ev = unc.split_train_eval(R, 12)
    assert (tr.num_scenarios, ev.num_scenarios) == (24, 264)


def test_split_rejects_bad_stride():
    R = scen([AB], [[1.0]])
    with pytest.raises(unc.UncertaintyError):
        unc.split_train_eval(R, 0)


def test_top_commodity_example():
    R = scen([AB, ("a", "c")], [[10.0, 1.0]])
    sub, cov = unc.select_top_commodities(R, 1)
    assert sub.commodities == (AB,)
    assert cov == pytest.approx(10 / 11)
    assert unc.select_top_commodities(R, 2)[1] == 1.0


def test_top_commodity_tie_break_is_canonical():
    R = scen([("a", "b"), ("a", "c"), ("b", "c")], [[1.0, 2.0, 2.0]])
    sub, _ = unc.select_top_commodities(R, 1)
    assert sub.commodities == (("a", "c"),)


@settings(max_examples=50, deadline=None)
@given(matrices(max_cols=6))
def test_coverage_monotone(D):
    assume(D.sum() > 0)
    curve = unc.coverage_curve(as_set(D), range(1, D.shape[1] + 1))
    covs = [c for _, c in curve]
    assert all(b >= a - 1e-12 for a, b in zip(covs, covs[1:]))
    assert covs[-1] == pytest.approx(1.0)


def test_restrict_and_drop():
    R = scen([AB, ("a", "c")], [[0.0, 1.0], [0.0, 2.0]])
    assert unc.drop_degenerate(R).commodities == (("a", "c"),)
    r = unc.restrict_to(R, [("a", "c"), ("x", "y")])
    assert r.demands.tolist() == [[1.0, 0.0], [2.0, 0.0]]


# -- stats and sets -----------------------------------------------------------------

def test_commodity_stats_examples():
    D = np.array([[2.0], [0.0], [4.0]])
    s = unc.commodity_stats(D, 0)
    assert (s.count, s.average, s.rmin, s.rmax, s.degenerate) == (2, 3.0, 2.0, 4.0, False)
    s = unc.commodity_stats(np.array([[5.0]]), 0)
    assert (s.count, s.average, s.rmin, s.rmax) == (1, 5.0, 5.0, 5.0)
    assert unc.commodity_stats(np.zeros((2, 1)), 0).degenerate


def test_discrete_set_examples():
    D = np.array([[1.0], [3.0]])
    assert unc.build_discrete_set(D, 0.5).scenarios.ravel().tolist() == [1.5, 2.5]
    assert np.array_equal(unc.build_discrete_set(D, 1.0).scenarios, D)
    assert unc.build_discrete_set(D, 0.0).scenarios.ravel().tolist() == [2.0, 2.0]
    with pytest.raises(unc.UncertaintyError):
        unc.build_discrete_set(D, 1.5)


def test_discrete_average_uses_positive_count():
    # r_hat for [2, 0, 4] is 6 / 2 = 3, not the plain mean 2
    D = np.array([[2.0], [0.0], [4.0]])
    assert unc.build_discrete_set(D, 0.0).scenarios.ravel().tolist() == [3.0, 3.0, 3.0]


@settings(max_examples=60, deadline=None)
@given(matrices(), st.floats(0.0, 1.0))
def test_discrete_set_affine_in_lambda(D, lam):
    d1 = unc.build_discrete_set(D, 1.0).scenarios
    d0 = unc.build_discrete_set(D, 0.0).scenarios
    assert np.allclose(unc.build_discrete_set(D, lam).scenarios, lam * d1 + (1 - lam) * d0,
                       rtol=1e-12, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(matrices(zeros=False), st.floats(0.0, 1.0))
def test_discrete_set_mean_is_r_hat(D, lam):
    r_hat = D.sum(axis=0) / D.shape[0]
    assert np.allclose(unc.build_discrete_set(D, lam).scenarios.mean(axis=0), r_hat, rtol=1e-12)


def test_bounds_examples():
    lo, hi = unc.build_bounds(np.array([[2.0], [0.0], [4.0]]))
    assert (lo.tolist(), hi.tolist()) == ([0.0], [4.0])
    lo, hi = unc.build_bounds(np.array([[3.0], [3.0]]))
    assert (lo.tolist(), hi.tolist()) == ([3.0], [3.0])
    with pytest.raises(unc.UncertaintyError):
        unc.build_bounds(np.zeros((0, 2)))


def test_zero_inflated_mean_examples():
    assert unc.zero_inflated_mean(np.array([[2.0], [0.0], [4.0]])).values.tolist() == [2.0]
    assert unc.zero_inflated_mean(np.full((4, 1), 3.5)).values.tolist() == [3.5]
    assert unc.zero_inflated_mean(np.zeros((3, 1))).values.tolist() == [0.0]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_zero_inflated_mean_range(D):
    m = unc.zero_inflated_mean(D).values
    assert np.all(m >= 0) and np.all(m <= D.max(axis=0) + 1e-12)


# -- polyhedra ------------------------------------------------------------------------

def test_tight_rhs_examples():
    D = np.array([[1.0, 2.0], [3.0, 1.0]])
    assert unc.tight_rhs(D, np.array([[0.5, 0.5]])).tolist() == [2.0]
    assert unc.tight_rhs(D, np.array([[1.0, 0.0]])).tolist() == [3.0]


def test_sum_constraint():
    v, b = unc.sum_constraint(np.array([[1.0, 2.0], [3.0, 1.0]]))
    assert v.tolist() == [0.5, 0.5] and b == 2.0


def test_sample_hyperplanes_layout():
    R = scen([AB, ("a", "c"), ("b", "c")], np.random.default_rng(0).uniform(0, 9, (6, 3)))
    P = unc.sample_hyperplanes(R, 4, 11)
    assert P.num_rows == 4 and P.dim == 3 and P.seed == 11
    assert np.allclose(P.V[0], 1 / 3)
    assert np.all((P.V[1:] >= 0) & (P.V[1:] <= 1))
    again = unc.sample_hyperplanes(R, 4, 11)
    assert np.array_equal(P.V, again.V) and np.array_equal(P.b, again.b)
    assert not np.array_equal(P.V, unc.sample_hyperplanes(R, 4, 12).V)


@settings(max_examples=50, deadline=None)
@given(matrices(max_rows=10), st.integers(1, 5), st.integers(0, 2**31))
def test_sampled_rows_tight_and_containing(D, M, seed):
    P = unc.sample_hyperplanes(D, M, seed)
    act = D @ P.V.T
    assert np.all(np.abs(act - P.b).min(axis=0) <= 1e-9)
    for r in D:
        assert unc.contains(P, r)


def test_contains_examples():
    D = np.array([[1.0, 2.0], [3.0, 1.0]])
    P = unc.sample_hyperplanes(D, 1, 0)
    assert unc.contains(P, D[0])
    out = P.upper.copy()
    out[1] += 1
    assert not unc.contains(P, out)
    assert unc.contains(P, 0.5 * (P.lower + P.upper))


def test_hit_and_run_stays_inside():
    D = np.random.default_rng(1).uniform(0, 5, (8, 3))
    P = unc.sample_hyperplanes(D, 3, 4)
    pts = unc.hit_and_run(P, 300, unc.make_rng(2))
    assert all(unc.contains(P, p, tol=1e-9) for p in pts)
    assert np.ptp(pts, axis=0).min() > 0


def test_interior_point_of_singleton():
    d = np.array([1.0, 2.0])
    assert np.allclose(unc.interior_point(unc.point_polyhedron(d)), d)


def test_polyhedron_csv_round_trip():
    R = scen([AB, ("b", "c")], [[1.0, 2.0], [3.0, 1.0], [0.1, 0.7]])
    P = unc.sample_hyperplanes(R, 3, 5)
    text = unc.write_polyhedron_csv(P)
    assert text.startswith("# polyhedron M=3 K=2 seed=5\n# commodities a:b,b:c\n[V]\n")
    Q = unc.parse_polyhedron_csv(text)
    for f in ("V", "b", "lower", "upper"):
        assert np.array_equal(getattr(P, f), getattr(Q, f))
    assert Q.seed == 5 and Q.commodities == P.commodities
    assert len(vertex_enumerate(P)) == len(vertex_enumerate(Q))


def test_polyhedron_validation():
    with pytest.raises(unc.UncertaintyError):
        unc.Polyhedron(np.ones((1, 2)), np.ones(1), np.ones(2), np.zeros(2))
    with pytest.raises(unc.UncertaintyError):
        unc.Polyhedron(np.ones((2, 2)), np.ones(1), np.zeros(2), np.ones(2))
