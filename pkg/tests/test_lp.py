from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from rncep import uncertainty as unc
from rncep.lp import (
    EQ,
    GE,
    LE,
    DimensionError,
    LinearProgram,
    LpBuilder,
    LpError,
    LpFileError,
    SolverOptions,
    Status,
    lp_vertex_optimum,
    solve,
    vertex_enumerate,
    write_lp_file,
)
from rncep.lp.lpfile import sanitize
from rncep.model_build import build_aarc, build_discrete_robust, build_nominal, worst_case_linear

from helpers import random_lp


def lp_of(c, A, senses, rhs, lb, ub):
    return LinearProgram(np.asarray(c, float), sp.csc_matrix(np.asarray(A, float).reshape(len(rhs), len(c))),
                         tuple(senses), np.asarray(rhs, float), np.asarray(lb, float), np.asarray(ub, float))


def one_dim():
    return lp_of([-1.0], [[1.0]], [LE], [4.0], [0.0], [np.inf])


# -- program ---------------------------------------------------------------------------

def test_program_validates_shapes_and_bounds():
    with pytest.raises(LpError):
        lp_of([1.0, 2.0], [[1.0, 1.0]], [LE], [1.0], [0.0], [1.0])
    with pytest.raises(LpError):
        lp_of([1.0], [[1.0]], ["<"], [1.0], [0.0], [1.0])
    with pytest.raises(LpError):
        lp_of([1.0], [[1.0]], [LE], [1.0], [2.0], [1.0])


def test_program_is_immutable():
    lp = one_dim()
    with pytest.raises(ValueError):
        lp.c[0] = 3.0


def test_builder_names_and_duplicates():
    b = LpBuilder()
    b.add_col(("X", 0), cost=1.0)
    b.add_col(("F", 0, 3))
    b.add_row(("CAP", 0), {0: 1.0, 1: -1.0}, LE, 2.0)
    with pytest.raises(LpError):
        b.add_col(("X", 0))
    lp = b.build()
    assert lp.row_names == ("CAP(0)",)
    assert lp.num_cols == 2 and lp.num_rows == 1


# -- solve -----------------------------------------------------------------------------

def test_one_dim_example():
    sol = solve(one_dim())
    assert sol.status is Status.OPTIMAL
    assert sol.x[0] == pytest.approx(4.0)
    assert sol.objective == pytest.approx(-4.0)


def test_infeasible_pair():
    lp = lp_of([1.0], [[1.0], [1.0]], [LE, GE], [1.0, 2.0], [-np.inf], [np.inf])
    assert solve(lp).status is Status.INFEASIBLE


def test_unbounded():
    lp = lp_of([-1.0, 0.0], [[1.0, -1.0]], [LE], [1.0], [0.0, 0.0], [np.inf, np.inf])
    assert solve(lp).status is Status.UNBOUNDED


def test_empty_lp_is_optimal():
    lp = LinearProgram(np.zeros(0), sp.csc_matrix((0, 0)), (), np.zeros(0), np.zeros(0), np.zeros(0))
    sol = solve(lp)
    assert sol.status is Status.OPTIMAL and sol.objective == 0.0


def test_equality_and_free_variables():
    # min x + y  s.t. x - y = 1, x + y >= 3, y free
    lp = lp_of([1.0, 1.0], [[1.0, -1.0], [1.0, 1.0]], [EQ, GE], [1.0, 3.0], [0.0, -np.inf], [np.inf, np.inf])
    sol = solve(lp)
    assert sol.objective == pytest.approx(3.0)
    assert sol.x == pytest.approx([2.0, 1.0])


def test_beale_cycling_example_terminates():
    # classic degenerate instance that cycles under naive Dantzig pricing
    c = [-0.75, 150.0, -0.02, 6.0]
    A = [[0.25, -60.0, -0.04, 9.0], [0.5, -90.0, -0.02, 3.0], [0.0, 0.0, 1.0, 0.0]]
    for bland_after in (0, 500):
        lp = lp_of(c, A, [LE, LE, LE], [0.0, 0.0, 1.0], [0] * 4, [np.inf] * 4)
        sol = solve(lp, bland_after=bland_after, scaling=False)
        assert sol.status is Status.OPTIMAL
        assert sol.objective == pytest.approx(-0.05)


def test_iteration_limit():
    rng = np.random.default_rng(5)
    lp = next(lp for lp in (random_lp(rng) for _ in range(50))
              if lp_vertex_optimum(lp) is not None and solve(lp).iterations > 1)
    assert solve(lp, max_iters=1).status is Status.ITERATION_LIMIT


def _check_duals(lp, sol, tol=1e-7):
    y, d = sol.duals, sol.reduced_costs
    assert np.allclose(lp.c - lp.A.T @ y, d, atol=tol)
    for i, s in enumerate(lp.senses):
        if s == LE:
            assert y[i] <= tol
        elif s == GE:
            assert y[i] >= -tol
    at_lb = np.isclose(sol.x, lp.lb, atol=1e-9)
    at_ub = np.isclose(sol.x, lp.ub, atol=1e-9)
    assert np.all((d >= -tol) | at_ub)
    assert np.all((d <= tol) | at_lb)
    # strong duality through the active bounds
    bound = np.where(at_lb & np.isfinite(lp.lb), lp.lb, np.where(at_ub, lp.ub, 0.0))
    assert y @ lp.rhs + d @ bound == pytest.approx(sol.objective, abs=1e-6)


def test_duals_feasible_on_random_lps():
    rng = np.random.default_rng(21)
    n = 0
    for _ in range(60):
        lp = random_lp(rng)
        sol = solve(lp)
        if sol.status is Status.OPTIMAL:
            _check_duals(lp, sol)
            n += 1
    assert n > 30


def test_deterministic_iterates():
    rng = np.random.default_rng(8)
    for _ in range(10):
        lp = random_lp(rng)
        a, b = solve(lp), solve(lp)
        assert a.status is b.status and a.iterations == b.iterations
        assert np.array_equal(a.x, b.x)


def test_scaling_and_highs_agree(desk):
    lp, _ = build_discrete_robust(desk.net, unc.build_discrete_set(desk.data, 0.5), 6.0)
    ref = solve(lp, backend="highs")
    for scaling in (True, False):
        sol = solve(lp, scaling=scaling)
        assert sol.meta["scaled"] is scaling
        assert sol.objective == pytest.approx(ref.objective, abs=1e-7)
    assert ref.meta["backend"] == "highs"


def test_solver_options_validation():
    with pytest.raises(ValueError):
        solve(one_dim(), backend="cplex")
    with pytest.raises(TypeError):
        solve(one_dim(), SolverOptions(), feas_tol=1e-6, not_an_option=1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_oracle_equivalence_property(seed):
    lp = random_lp(np.random.default_rng(seed))
    ref = lp_vertex_optimum(lp)
    sol = solve(lp)
    if ref is None:
        assert sol.status is Status.INFEASIBLE
    else:
        assert sol.objective == pytest.approx(ref, abs=1e-7)


# -- vertex enumeration ----------------------------------------------------------------

def _poly(V, b, lo, hi):
    return unc.Polyhedron(np.atleast_2d(np.asarray(V, float)), np.asarray(b, float),
                          np.asarray(lo, float), np.asarray(hi, float))


def _as_set(V):
    return {tuple(np.round(v, 9)) for v in V}


def test_vertices_of_box_with_loose_sum_row():
    P = _poly([[0.5, 0.5]], [10.0], [0, 0], [1, 2])
    assert _as_set(vertex_enumerate(P)) == {(0, 0), (1, 0), (0, 2), (1, 2)}


def test_vertices_of_cut_square():
    P = _poly([[1.0, 1.0]], [1.0], [0, 0], [1, 1])
    assert _as_set(vertex_enumerate(P)) == {(0, 0), (1, 0), (0, 1)}


def test_vertices_of_singleton():
    d = np.array([2.0, 3.0, 1.0])
    V = vertex_enumerate(unc.point_polyhedron(d))
    assert len(V) == 1 and np.allclose(V[0], d)


def test_vertex_dimension_cap():
    P = _poly(np.full((1, 9), 1 / 9), [1.0], np.zeros(9), np.ones(9))
    with pytest.raises(DimensionError):
        vertex_enumerate(P)


def test_linear_max_over_polytope_equals_vertex_max():
    rng = np.random.default_rng(4)
    R = unc.ScenarioSet((("a", "b"), ("a", "c"), ("b", "c")), rng.uniform(0, 5, (7, 3)),
                        tuple(str(i) for i in range(7)))
    P = unc.sample_hyperplanes(R, 3, 9)
    V = vertex_enumerate(P)
    for g in rng.normal(size=(20, 3)):
        assert worst_case_linear(P, g) == pytest.approx((V @ g).max(), abs=1e-7)


# -- LP file ---------------------------------------------------------------------------

GOLDEN_ONE_DIM = "Minimize\n obj: - x0\nSubject To\n c1: x0 <= 4\nEnd\n"


def test_lp_file_golden_one_dim():
    lp = LinearProgram(np.array([-1.0]), sp.csc_matrix([[1.0]]), (LE,), np.array([4.0]),
                       np.array([0.0]), np.array([np.inf]), ("c1",))
    text = write_lp_file(lp, ["x0"])
    assert text == GOLDEN_ONE_DIM
    assert len(text.splitlines()) == 5


def test_lp_file_empty():
    lp = LinearProgram(np.zeros(0), sp.csc_matrix((0, 0)), (), np.zeros(0), np.zeros(0), np.zeros(0))
    assert write_lp_file(lp, []) == "Minimize\n obj:\nSubject To\nEnd\n"


def test_lp_file_bounds_and_names():
    lp = lp_of([1.0, -2.5, 0.0], [[1.0, 1.0, 1.0], [2.0, 0.0, -1.0]], [GE, EQ], [1.0, 0.0],
               [0.0, -np.inf, -1.0], [np.inf, np.inf, 3.0])
    text = write_lp_file(lp, ["X(0)", "PHI(0,1)", "z"])
    assert "Bounds\n X_0 >= 0" not in text        # default bound omitted
    assert " PHI_0_1 free\n" in text
    assert " -1 <= z <= 3\n" in text
    assert " obj: X_0 - 2.5 PHI_0_1\n" in text
    assert " c1: 2 X_0 - z = 0\n" in text
    with pytest.raises(LpFileError):
        write_lp_file(lp, ["a", "b"])


def test_sanitize():
    assert sanitize("F(0,Kiel,3)") == "F_0_Kiel_3"
    assert sanitize("a.b_c") == "a.b_c"


@pytest.mark.slow
@pytest.mark.parametrize("model", ["nominal", "discrete", "aarc"])
def test_lp_file_round_trip_with_external_solver(tmp_path, desk, model):
    hs = pytest.importorskip("highspy")
    sig = 6.0
    if model == "nominal":
        lp, cat = build_nominal(desk.net, desk.data.commodities, desk.data.demands.mean(axis=0), sig)
    elif model == "discrete":
        lp, cat = build_discrete_robust(desk.net, unc.build_discrete_set(desk.data, 1.0), sig)
    else:
        lp, cat = build_aarc(desk.net, desk.P, sig)
    path = tmp_path / f"{model}.lp"
    path.write_text(write_lp_file(lp, cat))
    h = hs.Highs()
    h.setOptionValue("output_flag", False)
    assert h.readModel(str(path)) == hs.HighsStatus.kOk
    h.run()
    assert h.getModelStatus() == hs.HighsModelStatus.kOptimal
    assert h.getInfo().objective_function_value == pytest.approx(solve(lp).objective, abs=1e-6)
