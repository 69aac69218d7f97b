"""Affine adjustable robust counterpart over a polyhedral demand set.

Flows follow the affine rule ``f^k_a(d) = PHI(k,a) + sum_l PHI2(k,l,a) d_l``.
Each robust constraint family is replaced by the dual of its inner
worst-case LP over ``P = {V d <= b, lower <= d <= upper}``; the worst-case
outsourcing term uses the McCormick-style relaxation of the bracket
selector ``z_k`` and its LP dual.

Columns, in order (k, l commodities; a arcs; v intermediate nodes of k;
i polyhedron rows)::

    X(a)                      >= 0     cost c_a
    PHI(k,a), PHI2(k,l,a)     free
    ALPHA(k,v,i), BETA_UP(k,v,l), BETA_LO(k,v,l)          flow duals
    PI(a,i), RHO_UP(a,l), RHO_LO(a,l)                     capacity duals
    XI(k,a,i), ZETA_UP(k,l,a), ZETA_LO(k,l,a)             positivity duals
    Q(i), R(k,l), S(k,l), T(k,l), U(l), VDUAL(l), W(k)    outsourcing duals

All dual columns are nonnegative.  Objective::

    c.x + sigma * (b.Q + sum_{k,l} upper_l T(k,l) + upper.U - lower.VDUAL + sum_k W(k))

Rows, in order::

    OBJ_D(l)       V[:,l].Q - sum_k R(k,l) + sum_k T(k,l) + U(l) - VDUAL(l) >= 0
    OBJ_Z(k)       -upper.S(k,:) + upper.T(k,:) + W(k) - g_k(PHI) >= 0
    OBJ_ZP(k,l)    R + S - T - G_kl(PHI2) >= [k == l]
    FLOW_RHS(k,v)  inflow_v(PHI_k) - outflow_v(PHI_k) - b.ALPHA - upper.BETA_UP + lower.BETA_LO >= 0
    FLOW_DUAL(k,v,l)  V[:,l].ALPHA + BETA_UP - BETA_LO - (out_v - in_v)(PHI2_kl) >= 0
    CAP_RHS(a)     sum_k PHI(k,a) + b.PI + upper.RHO_UP - lower.RHO_LO - X(a) <= u_a
    CAP_DUAL(a,l)  V[:,l].PI + RHO_UP - RHO_LO - sum_k PHI2(k,l,a) >= 0
    POS_RHS(k,a)   PHI(k,a) - b.XI - upper.ZETA_UP + lower.ZETA_LO >= 0
    POS_DUAL(k,a,l)   V[:,l].XI + ZETA_UP - ZETA_LO + PHI2(k,l,a) >= 0

where ``g_k = (out - in)_{t^k}(PHI_k)`` and ``G_kl = (out - in)_{t^k}(PHI2_kl)``.
"""

from __future__ import annotations

import numpy as np

from ..lp.program import GE, LE, LinearProgram, LpBuilder
from ..sndlib_io import NetworkSpec
from ..uncertainty import Polyhedron
from .catalog import VariableCatalog
from .flow import ModelError, _check_sigma, check_commodities, intermediate_nodes

FREE = (-np.inf, np.inf)


def _add(coefs: dict[int, float], j: int, v: float) -> None:
    coefs[j] = coefs.get(j, 0.0) + v


def build_aarc(net: NetworkSpec, P: Polyhedron, sigma: float,
               commodities=None) -> tuple[LinearProgram, VariableCatalog]:
    comms = list(commodities if commodities is not None else P.commodities)
    check_commodities(net, comms)
    sigma = _check_sigma(sigma)
    K, A, M = len(comms), net.num_arcs, P.num_rows
    if P.dim != K:
        raise ModelError(f"polyhedron dimension {P.dim} does not match {K} commodities")
    if M < 1:
        raise ModelError("polyhedron needs at least one row")
    V, bvec, lo, hi = P.V, P.b, P.lower, P.upper
    mids = [intermediate_nodes(net, s, t) for s, t in comms]
    Ks, As, Ms = range(K), range(A), range(M)

    b = LpBuilder()
    for a, arc in enumerate(net.arcs):
        b.add_col(("X", a), cost=arc.cost)
    for k in Ks:
        for a in As:
            b.add_col(("PHI", k, a), lb=-np.inf)
    for k in Ks:
        for l in Ks:
            for a in As:
                b.add_col(("PHI2", k, l, a), lb=-np.inf)
    for k in Ks:
        for v in mids[k]:
            for i in Ms:
                b.add_col(("ALPHA", k, v, i))
    for fam in ("BETA_UP", "BETA_LO"):
        for k in Ks:
            for v in mids[k]:
                for l in Ks:
                    b.add_col((fam, k, v, l))
    for a in As:
        for i in Ms:
            b.add_col(("PI", a, i))
    for fam in ("RHO_UP", "RHO_LO"):
        for a in As:
            for l in Ks:
                b.add_col((fam, a, l))
    for k in Ks:
        for a in As:
            for i in Ms:
                b.add_col(("XI", k, a, i))
    for fam in ("ZETA_UP", "ZETA_LO"):
        for k in Ks:
            for l in Ks:
                for a in As:
                    b.add_col((fam, k, l, a))
    for i in Ms:
        b.add_col(("Q", i), cost=sigma * bvec[i])
    for fam in ("R", "S"):
        for k in Ks:
            for l in Ks:
                b.add_col((fam, k, l))
    for k in Ks:
        for l in Ks:
            b.add_col(("T", k, l), cost=sigma * hi[l])
    for l in Ks:
        b.add_col(("U", l), cost=sigma * hi[l])
    for l in Ks:
        b.add_col(("VDUAL", l), cost=-sigma * lo[l])
    for k in Ks:
        b.add_col(("W", k), cost=sigma)

    c = b.col
    # outsourcing term
    for l in Ks:
        coefs: dict[int, float] = {}
        for i in Ms:
            _add(coefs, c(("Q", i)), V[i, l])
        for k in Ks:
            _add(coefs, c(("R", k, l)), -1.0)
            _add(coefs, c(("T", k, l)), 1.0)
        _add(coefs, c(("U", l)), 1.0)
        _add(coefs, c(("VDUAL", l)), -1.0)
        b.add_row(("OBJ_D", l), coefs, GE, 0.0)
    for k, (s, t) in enumerate(comms):
        coefs = {}
        for l in Ks:
            _add(coefs, c(("S", k, l)), -hi[l])
            _add(coefs, c(("T", k, l)), hi[l])
        _add(coefs, c(("W", k)), 1.0)
        for a in net.out_arcs[t]:
            _add(coefs, c(("PHI", k, a)), -1.0)
        for a in net.in_arcs[t]:
            _add(coefs, c(("PHI", k, a)), 1.0)
        b.add_row(("OBJ_Z", k), coefs, GE, 0.0)
    for k, (s, t) in enumerate(comms):
        for l in Ks:
            coefs = {c(("R", k, l)): 1.0, c(("S", k, l)): 1.0, c(("T", k, l)): -1.0}
            for a in net.out_arcs[t]:
                _add(coefs, c(("PHI2", k, l, a)), -1.0)
            for a in net.in_arcs[t]:
                _add(coefs, c(("PHI2", k, l, a)), 1.0)
            b.add_row(("OBJ_ZP", k, l), coefs, GE, 1.0 if k == l else 0.0)
    # flow conservation at intermediate nodes
    for k in Ks:
        for v in mids[k]:
            coefs = {}
            for a in net.in_arcs[v]:
                _add(coefs, c(("PHI", k, a)), 1.0)
            for a in net.out_arcs[v]:
                _add(coefs, c(("PHI", k, a)), -1.0)
            for i in Ms:
                _add(coefs, c(("ALPHA", k, v, i)), -bvec[i])
            for l in Ks:
                _add(coefs, c(("BETA_UP", k, v, l)), -hi[l])
                _add(coefs, c(("BETA_LO", k, v, l)), lo[l])
            b.add_row(("FLOW_RHS", k, v), coefs, GE, 0.0)
    for k in Ks:
        for v in mids[k]:
            for l in Ks:
                coefs = {}
                for i in Ms:
                    _add(coefs, c(("ALPHA", k, v, i)), V[i, l])
                _add(coefs, c(("BETA_UP", k, v, l)), 1.0)
                _add(coefs, c(("BETA_LO", k, v, l)), -1.0)
                for a in net.out_arcs[v]:
                    _add(coefs, c(("PHI2", k, l, a)), -1.0)
                for a in net.in_arcs[v]:
                    _add(coefs, c(("PHI2", k, l, a)), 1.0)
                b.add_row(("FLOW_DUAL", k, v, l), coefs, GE, 0.0)
    # arc capacity
    for a, arc in enumerate(net.arcs):
        coefs = {c(("X", a)): -1.0}
        for k in Ks:
            _add(coefs, c(("PHI", k, a)), 1.0)
        for i in Ms:
            _add(coefs, c(("PI", a, i)), bvec[i])
        for l in Ks:
            _add(coefs, c(("RHO_UP", a, l)), hi[l])
            _add(coefs, c(("RHO_LO", a, l)), -lo[l])
        b.add_row(("CAP_RHS", a), coefs, LE, arc.capacity)
    for a in As:
        for l in Ks:
            coefs = {}
            for i in Ms:
                _add(coefs, c(("PI", a, i)), V[i, l])
            _add(coefs, c(("RHO_UP", a, l)), 1.0)
            _add(coefs, c(("RHO_LO", a, l)), -1.0)
            for k in Ks:
                _add(coefs, c(("PHI2", k, l, a)), -1.0)
            b.add_row(("CAP_DUAL", a, l), coefs, GE, 0.0)
    # flow nonnegativity
    for k in Ks:
        for a in As:
            coefs = {c(("PHI", k, a)): 1.0}
            for i in Ms:
                _add(coefs, c(("XI", k, a, i)), -bvec[i])
            for l in Ks:
                _add(coefs, c(("ZETA_UP", k, l, a)), -hi[l])
                _add(coefs, c(("ZETA_LO", k, l, a)), lo[l])
            b.add_row(("POS_RHS", k, a), coefs, GE, 0.0)
    for k in Ks:
        for a in As:
            for l in Ks:
                coefs = {}
                for i in Ms:
                    _add(coefs, c(("XI", k, a, i)), V[i, l])
                _add(coefs, c(("ZETA_UP", k, l, a)), 1.0)
                _add(coefs, c(("ZETA_LO", k, l, a)), -1.0)
                _add(coefs, c(("PHI2", k, l, a)), 1.0)
                b.add_row(("POS_DUAL", k, a, l), coefs, GE, 0.0)
    return b.build(), VariableCatalog(b.col_keys, b.row_keys)


def aarc_sizes(num_nodes: int, num_arcs: int, K: int, M: int, mids_total: int | None = None) -> dict[str, int]:
    """Closed-form column/row counts; ``mids_total`` defaults to K * (|V| - 2)."""
    Vm = K * (num_nodes - 2) if mids_total is None else mids_total
    A = num_arcs
    cols = (A + K * A + K * K * A + Vm * M + 2 * Vm * K + A * M + 2 * A * K
            + K * A * M + 2 * K * K * A + M + 3 * K * K + 2 * K + K)
    rows = K + K + K * K + Vm + Vm * K + A + A * K + K * A + K * A * K
    return {"cols": cols, "rows": rows}
