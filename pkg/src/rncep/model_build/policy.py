"""Reading solutions back out of model LPs, and worst-case oracles for affine policies."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..lp.program import LE, LinearProgram, LpBuilder, LpSolution, Status
from ..lp.simplex import SolverOptions, solve
from ..sndlib_io import NetworkSpec
from ..uncertainty import Polyhedron
from .catalog import CatalogError, VariableCatalog
from .flow import ModelError, intermediate_nodes

ORACLE_MAX_K = 12


@dataclass(frozen=True)
class AffinePolicy:
    """``f^k_a(d) = phi[k, a] + sum_l Phi[k, l, a] * d[l]``."""

    phi: np.ndarray   # K x A
    Phi: np.ndarray   # K x K x A

    @property
    def num_commodities(self) -> int:
        return self.phi.shape[0]

    def flows(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=float)
        return self.phi + np.einsum("kla,l->ka", self.Phi, d)


def _check_solution(sol: LpSolution, cat: VariableCatalog) -> None:
    if len(sol.x) != len(cat):
        raise CatalogError(f"solution has {len(sol.x)} values, catalog has {len(cat)} columns")


def extract_first_stage(sol: LpSolution, cat: VariableCatalog, tol: float = 1e-7) -> np.ndarray:
    """Investment vector ``x`` from a solved expansion model (tiny negatives clamped)."""
    _check_solution(sol, cat)
    x = np.asarray(sol.x, dtype=float)[cat.family("X")]
    if np.any(x < -tol):
        raise ModelError(f"investment entry {x.min()} is below -{tol}")
    return np.maximum(x, 0.0)


def extract_affine_policy(sol: LpSolution, cat: VariableCatalog) -> AffinePolicy:
    _check_solution(sol, cat)
    phi_idx = cat.family("PHI")
    Phi_idx = cat.family("PHI2")
    A = cat.count("X")
    if A == 0 or phi_idx.size % A:
        raise CatalogError("catalog lacks affine policy columns")
    K = phi_idx.size // A
    x = np.asarray(sol.x, dtype=float)
    return AffinePolicy(x[phi_idx].reshape(K, A), x[Phi_idx].reshape(K, K, A))


def worst_case_outsourcing(sol: LpSolution, cat: VariableCatalog, P: Polyhedron | None = None) -> float:
    """The worst-case outsourced amount encoded in a solved model.

    TAU for the discrete model, the sum of H for single-scenario models, and
    the dual bound on the bracket term for the affine model (needs ``P``).
    """
    _check_solution(sol, cat)
    x = np.asarray(sol.x, dtype=float)
    if ("TAU",) in cat:
        return float(x[cat.index(("TAU",))])
    if cat.count("W"):
        if P is None:
            raise ModelError("the affine model needs its polyhedron to report outsourcing")
        return aarc_outsourcing_bound(cat, x, P)
    return float(x[cat.family("H")].sum())


def recourse_worst_case(lp_unit: LinearProgram, cat: VariableCatalog, x,
                        opts: SolverOptions | None = None) -> float:
    """Least worst-case outsourcing reachable once ``X`` is fixed at ``x``.

    ``lp_unit`` must be the model built with sigma = 1.  Useful at sigma = 0,
    where the solved model leaves the outsourcing variables undetermined.
    """
    idx = cat.family("X")
    lb, ub, c = lp_unit.lb.copy(), lp_unit.ub.copy(), lp_unit.c.copy()
    lb[idx] = ub[idx] = np.asarray(x, dtype=float)
    c[idx] = 0.0
    sol = solve(LinearProgram(c, lp_unit.A, lp_unit.senses, lp_unit.rhs, lb, ub, lp_unit.row_names), opts)
    if sol.status is not Status.OPTIMAL:
        raise ModelError(f"recourse problem ended with {sol.status.value}")
    return float(sol.objective)


def aarc_outsourcing_bound(cat: VariableCatalog, x: np.ndarray, P: Polyhedron) -> float:
    """``b.Q + sum upper_l T(k,l) + upper.U - lower.VDUAL + sum W`` at ``x``."""
    x = np.asarray(x, dtype=float)
    K = P.dim
    val = math.fsum(P.b * x[cat.family("Q")])
    T = x[cat.family("T")].reshape(K, K)
    val += math.fsum((T * P.upper[None, :]).ravel())
    val += math.fsum(P.upper * x[cat.family("U")])
    val -= math.fsum(P.lower * x[cat.family("VDUAL")])
    val += math.fsum(x[cat.family("W")])
    return float(val)


# -- direct worst cases over the polyhedron ---------------------------------------

def _polytope_lp(P: Polyhedron, cost: np.ndarray) -> LinearProgram:
    """min cost.d over P."""
    V = sp.csc_matrix(P.V)
    return LinearProgram(cost, V, (LE,) * P.num_rows, P.b, P.lower, P.upper)


def worst_case_linear(P: Polyhedron, g, opts: SolverOptions | None = None) -> float:
    """``max g.d`` over ``P`` by solving the inner LP directly."""
    g = np.asarray(g, dtype=float)
    sol = solve(_polytope_lp(P, -g), opts)
    if sol.status is not Status.OPTIMAL:
        raise ModelError(f"inner worst-case LP ended with {sol.status.value}")
    return -sol.objective


def _net_outflow(net: NetworkSpec, v: str, per_arc: np.ndarray) -> np.ndarray:
    """``sum_{out(v)} - sum_{in(v)}`` along the last axis."""
    out = np.asarray(net.out_arcs[v], dtype=np.int64)
    inc = np.asarray(net.in_arcs[v], dtype=np.int64)
    return per_arc[..., out].sum(axis=-1) - per_arc[..., inc].sum(axis=-1)


def family_coefficients(net: NetworkSpec, commodities, policy: AffinePolicy, family: str, index) -> np.ndarray:
    """Demand coefficients ``g`` of the uncertain right-hand side of one robust row."""
    if family == "flow":
        k, v = index
        return _net_outflow(net, v, policy.Phi[k])
    if family == "capacity":
        (a,) = index if isinstance(index, tuple) else (index,)
        return policy.Phi[:, :, a].sum(axis=0)
    if family == "positivity":
        k, a = index
        return -policy.Phi[k, :, a]
    raise ValueError(f"unknown family {family!r}")


_FAMILY_ROWS = {
    "flow": ("FLOW_RHS", "FLOW_DUAL", ("ALPHA", "BETA_UP", "BETA_LO")),
    "capacity": ("CAP_RHS", "CAP_DUAL", ("PI", "RHO_UP", "RHO_LO")),
    "positivity": ("POS_RHS", "POS_DUAL", ("XI", "ZETA_UP", "ZETA_LO")),
}


def family_dual_lp(lp: LinearProgram, cat: VariableCatalog, family: str, index,
                   fixed: np.ndarray) -> LinearProgram:
    """The dual sub-LP of one robust row, cut out of an assembled affine model.

    Dual columns are those of ``family`` for ``index``; rows are the family's
    dual rows for ``index``.  All other columns are held at ``fixed`` and moved
    to the right-hand side.  The objective is the dual part of the row's
    right-hand side, so the optimum equals the worst case of the uncertain
    term at the fixed policy.
    """
    rhs_fam, dual_fam, col_fams = _FAMILY_ROWS[family]
    index = index if isinstance(index, tuple) else (index,)
    rhs_row = cat.row((rhs_fam, *index))
    n = len(index)
    rows = [i for i in cat.row_family(dual_fam) if cat.row_keys[i][1:1 + n] == index]
    cols = [j for f in col_fams for j in cat.family(f) if _owned(cat.col_keys[j], f, index)]
    cols = np.array(cols, dtype=np.int64)
    rest = np.setdiff1d(np.arange(lp.num_cols), cols)
    A = lp.A.tocsr()
    sign = 1.0 if lp.senses[rhs_row] == LE else -1.0
    c = sign * A[rhs_row][:, cols].toarray().ravel()
    sub = A[rows][:, cols]
    rhs = lp.rhs[rows] - A[rows][:, rest] @ np.asarray(fixed, dtype=float)[rest]
    return LinearProgram(c, sub.tocsc(), tuple(lp.senses[i] for i in rows), rhs,
                         lp.lb[cols], lp.ub[cols])


def _owned(key, fam: str, index: tuple) -> bool:
    # ZETA_*(k,l,a) is indexed by (k, a) with l in the middle
    if fam in ("ZETA_UP", "ZETA_LO"):
        return (key[1], key[3]) == index
    return key[1:1 + len(index)] == index


def family_indices(net: NetworkSpec, commodities, family: str) -> list[tuple]:
    comms = list(commodities)
    if family == "flow":
        return [(k, v) for k, (s, t) in enumerate(comms) for v in intermediate_nodes(net, s, t)]
    if family == "capacity":
        return [(a,) for a in range(net.num_arcs)]
    if family == "positivity":
        return [(k, a) for k in range(len(comms)) for a in range(net.num_arcs)]
    raise ValueError(f"unknown family {family!r}")


def policy_vector(cat: VariableCatalog, policy: AffinePolicy, x: np.ndarray | None = None) -> np.ndarray:
    """Full column vector with policy (and optionally investment) entries filled in."""
    z = np.zeros(len(cat))
    z[cat.family("PHI")] = policy.phi.ravel()
    z[cat.family("PHI2")] = policy.Phi.ravel()
    if x is not None:
        z[cat.family("X")] = x
    return z


# -- outsourcing term ----------------------------------------------------------------

def _sink_terms(net: NetworkSpec, commodities, policy: AffinePolicy) -> tuple[np.ndarray, np.ndarray]:
    """Outsourced amount of commodity k at demand d is ``e_k.d + g0[k] + G[k].d``."""
    K = len(commodities)
    g0 = np.empty(K)
    G = np.empty((K, K))
    for k, (s, t) in enumerate(commodities):
        g0[k] = _net_outflow(net, t, policy.phi[k])
        G[k] = _net_outflow(net, t, policy.Phi[k])
    return g0, G


def outsourced_at(net: NetworkSpec, commodities, policy: AffinePolicy, d) -> np.ndarray:
    """Per-commodity ``[d_k - net inflow at t^k]_+`` under the policy."""
    d = np.asarray(d, dtype=float)
    g0, G = _sink_terms(net, commodities, policy)
    return np.maximum(d + g0 + G @ d, 0.0)


def worst_case_outsourcing_oracle(P: Polyhedron, policy: AffinePolicy, sigma: float,
                                  net: NetworkSpec, commodities=None,
                                  opts: SolverOptions | None = None) -> float:
    """Exact ``max_{d in P} sigma * sum_k [d_k - inflow_k(d)]_+`` by sign-pattern enumeration.

    Each of the 2^K selections ``z`` gives an LP over ``d``; the answer is the
    best over all of them.
    """
    comms = list(commodities if commodities is not None else P.commodities)
    K = len(comms)
    if K > ORACLE_MAX_K:
        raise ModelError(f"oracle enumerates 2^K patterns; K={K} exceeds {ORACLE_MAX_K}")
    g0, G = _sink_terms(net, comms, policy)
    lin = np.eye(K) + G
    best = 0.0
    for z in itertools.product((0.0, 1.0), repeat=K):
        z = np.array(z)
        if not z.any():
            continue
        val = worst_case_linear(P, z @ lin, opts) + float(z @ g0)
        best = max(best, val)
    return float(sigma) * best


def relaxed_outsourcing_primal(P: Polyhedron, policy: AffinePolicy, net: NetworkSpec,
                               commodities=None) -> LinearProgram:
    """The relaxed inner maximization (over d, z in [0,1]^K, z') written as a min LP.

    Its optimum is minus the value whose dual appears in the affine model's
    objective.
    """
    comms = list(commodities if commodities is not None else P.commodities)
    K = len(comms)
    g0, G = _sink_terms(net, comms, policy)
    lo, hi = P.lower, P.upper
    b = LpBuilder()
    for l in range(K):
        b.add_col(("d", l))
    for k in range(K):
        b.add_col(("z", k), cost=-g0[k], ub=1.0)
    for k in range(K):
        for l in range(K):
            b.add_col(("zp", k, l), cost=-((1.0 if k == l else 0.0) + G[k, l]))
    c = b.col
    for i in range(P.num_rows):
        b.add_row(("q", i), {c(("d", l)): P.V[i, l] for l in range(K)}, LE, P.b[i])
    for k in range(K):
        for l in range(K):
            b.add_row(("r", k, l), {c(("zp", k, l)): 1.0, c(("d", l)): -1.0}, LE, 0.0)
    for k in range(K):
        for l in range(K):
            b.add_row(("s", k, l), {c(("zp", k, l)): 1.0, c(("z", k)): -hi[l]}, LE, 0.0)
    for k in range(K):
        for l in range(K):
            b.add_row(("t", k, l), {c(("d", l)): 1.0, c(("z", k)): hi[l], c(("zp", k, l)): -1.0}, LE, hi[l])
    for l in range(K):
        b.add_row(("u", l), {c(("d", l)): 1.0}, LE, hi[l])
    for l in range(K):
        b.add_row(("v", l), {c(("d", l)): -1.0}, LE, -lo[l])
    return b.build()


def outsourcing_dual_lp(lp: LinearProgram, cat: VariableCatalog, fixed: np.ndarray, P: Polyhedron) -> LinearProgram:
    """The outsourcing dual block cut out of an assembled affine model, policy fixed."""
    fams = ("Q", "R", "S", "T", "U", "VDUAL", "W")
    cols = np.concatenate([cat.family(f) for f in fams])
    rows = np.concatenate([cat.row_family(f) for f in ("OBJ_D", "OBJ_Z", "OBJ_ZP")])
    rest = np.setdiff1d(np.arange(lp.num_cols), cols)
    A = lp.A.tocsr()
    K = P.dim
    c = np.concatenate([
        P.b, np.zeros(2 * K * K), np.tile(P.upper, K), P.upper, -P.lower, np.ones(K)])
    sub = A[rows][:, cols]
    rhs = lp.rhs[rows] - A[rows][:, rest] @ np.asarray(fixed, dtype=float)[rest]
    return LinearProgram(c, sub.tocsc(), tuple(lp.senses[i] for i in rows), rhs, lp.lb[cols], lp.ub[cols])
