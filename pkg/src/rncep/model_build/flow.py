"""Scenario-based capacity-expansion LPs: nominal, discrete robust, stochastic mean,
and the fixed-investment evaluation flow problem.

Column order (nominal / stochastic)::

    X(a)           a = 0..|A|-1          cost c_a
    F(k,a)         k-major               cost 0
    H(k)                                 cost sigma

Row order::

    OUT(k)     H(k) + inflow_k(t^k) - outflow_k(t^k) >= d_k
    FLOW(k,v)  inflow_k(v) - outflow_k(v) >= 0      v not in {s^k, t^k}, node order
    CAP(a)     sum_k F(k,a) - X(a) <= u_a

Nodes without incident arcs produce no FLOW row.  The discrete robust model
replicates F, H, OUT, FLOW and CAP per scenario ``i`` and adds ``TAU``::

    X(a); F(k,i,a) (i, then k, then a); H(k,i) (i, then k); TAU     cost sigma
    TAU(i): TAU - sum_k H(k,i) >= 0;  OUT(k,i); FLOW(k,i,v); CAP(i,a)

so it has |A| + N*K*|A| + N*K + 1 columns.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..lp.program import GE, LE, LinearProgram, LpBuilder
from ..sndlib_io import NetworkSpec
from ..uncertainty import DiscreteSet, MeanDemand
from .catalog import VariableCatalog


class ModelError(ValueError):
    pass


def check_commodities(net: NetworkSpec, commodities: Sequence[tuple[str, str]]) -> None:
    known = net.node_index
    for k, (s, t) in enumerate(commodities):
        if s == t:
            raise ModelError(f"commodity {k} has source equal to sink ({s})")
        for v in (s, t):
            if v not in known:
                raise ModelError(f"commodity {k} references unknown node {v}")


def intermediate_nodes(net: NetworkSpec, s: str, t: str) -> list[str]:
    """Nodes other than s and t that touch at least one arc, in node order."""
    return [v for v in net.nodes if v not in (s, t) and (net.in_arcs[v] or net.out_arcs[v])]


def _flow_rows(b: LpBuilder, net: NetworkSpec, comms, demand, fkey, hcol, tag) -> None:
    """OUT and FLOW rows for one demand vector.

    ``fkey(k, a)`` gives the F column key, ``hcol(k)`` the H column index and
    ``tag`` extra key components for the row keys (scenario index or empty).
    """
    for k, (s, t) in enumerate(comms):
        coefs = {hcol(k): 1.0}
        for a in net.in_arcs[t]:
            coefs[b.col(fkey(k, a))] = coefs.get(b.col(fkey(k, a)), 0.0) + 1.0
        for a in net.out_arcs[t]:
            coefs[b.col(fkey(k, a))] = coefs.get(b.col(fkey(k, a)), 0.0) - 1.0
        b.add_row(("OUT", k, *tag), coefs, GE, float(demand[k]))
    for k, (s, t) in enumerate(comms):
        for v in intermediate_nodes(net, s, t):
            coefs: dict[int, float] = {}
            for a in net.in_arcs[v]:
                j = b.col(fkey(k, a))
                coefs[j] = coefs.get(j, 0.0) + 1.0
            for a in net.out_arcs[v]:
                j = b.col(fkey(k, a))
                coefs[j] = coefs.get(j, 0.0) - 1.0
            b.add_row(("FLOW", k, *tag, v), coefs, GE, 0.0)


def _finish(b: LpBuilder) -> tuple[LinearProgram, VariableCatalog]:
    return b.build(), VariableCatalog(b.col_keys, b.row_keys)


def _as_demand(d, K: int) -> np.ndarray:
    d = np.asarray(d, dtype=float).reshape(-1)
    if d.size != K:
        raise ModelError(f"demand vector has {d.size} entries for {K} commodities")
    if np.any(d < 0) or not np.all(np.isfinite(d)):
        raise ModelError("demands must be finite and nonnegative")
    return d


def _check_sigma(sigma: float) -> float:
    sigma = float(sigma)
    if not sigma >= 0:
        raise ModelError("sigma must be nonnegative")
    return sigma


def build_nominal(net: NetworkSpec, commodities, d, sigma: float) -> tuple[LinearProgram, VariableCatalog]:
    """Single-scenario expansion LP: min c.x + sigma * sum_k h_k."""
    comms = list(commodities)
    check_commodities(net, comms)
    d = _as_demand(d, len(comms))
    sigma = _check_sigma(sigma)
    A = net.num_arcs
    b = LpBuilder()
    for a, arc in enumerate(net.arcs):
        b.add_col(("X", a), cost=arc.cost)
    for k in range(len(comms)):
        for a in range(A):
            b.add_col(("F", k, a))
    for k in range(len(comms)):
        b.add_col(("H", k), cost=sigma)
    _flow_rows(b, net, comms, d, lambda k, a: ("F", k, a), lambda k: b.col(("H", k)), ())
    for a, arc in enumerate(net.arcs):
        coefs = {b.col(("F", k, a)): 1.0 for k in range(len(comms))}
        coefs[b.col(("X", a))] = -1.0
        b.add_row(("CAP", a), coefs, LE, arc.capacity)
    return _finish(b)


def build_stochastic_mean(net: NetworkSpec, mean: MeanDemand, sigma: float,
                          commodities=None) -> tuple[LinearProgram, VariableCatalog]:
    """Nominal model on the fitted mean demand vector."""
    comms = commodities if commodities is not None else mean.commodities
    return build_nominal(net, comms, mean.values, sigma)


def build_discrete_robust(net: NetworkSpec, U: DiscreteSet, sigma: float,
                          commodities=None) -> tuple[LinearProgram, VariableCatalog]:
    """Worst case over a finite scenario list: min c.x + sigma * tau."""
    comms = list(commodities if commodities is not None else U.commodities)
    check_commodities(net, comms)
    sigma = _check_sigma(sigma)
    D = np.atleast_2d(np.asarray(U.scenarios, dtype=float))
    if D.shape[0] == 0:
        raise ModelError("discrete uncertainty set is empty")
    K, A = len(comms), net.num_arcs
    if D.shape[1] != K:
        raise ModelError(f"scenario width {D.shape[1]} does not match {K} commodities")
    b = LpBuilder()
    for a, arc in enumerate(net.arcs):
        b.add_col(("X", a), cost=arc.cost)
    N = D.shape[0]
    for i in range(N):
        for k in range(K):
            for a in range(A):
                b.add_col(("F", k, i, a))
    for i in range(N):
        for k in range(K):
            b.add_col(("H", k, i))
    tau = b.add_col(("TAU",), cost=sigma)
    for i in range(N):
        coefs = {tau: 1.0}
        for k in range(K):
            coefs[b.col(("H", k, i))] = -1.0
        b.add_row(("TAU", i), coefs, GE, 0.0)
    for i in range(N):
        _flow_rows(b, net, comms, _as_demand(D[i], K),
                   lambda k, a, i=i: ("F", k, i, a), lambda k, i=i: b.col(("H", k, i)), (i,))
    for i in range(N):
        for a, arc in enumerate(net.arcs):
            coefs = {b.col(("F", k, i, a)): 1.0 for k in range(K)}
            coefs[b.col(("X", a))] = -1.0
            b.add_row(("CAP", i, a), coefs, LE, arc.capacity)
    return _finish(b)


def build_evaluation_flow(net: NetworkSpec, commodities, x, d) -> tuple[LinearProgram, VariableCatalog]:
    """Min total outsourced demand for fixed investment ``x``."""
    comms = list(commodities)
    check_commodities(net, comms)
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != net.num_arcs:
        raise ModelError(f"investment has {x.size} entries for {net.num_arcs} arcs")
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise ModelError("investment entries must be finite and nonnegative")
    d = _as_demand(d, len(comms))
    b = LpBuilder()
    for k in range(len(comms)):
        for a in range(net.num_arcs):
            b.add_col(("F", k, a))
    for k in range(len(comms)):
        b.add_col(("H", k), cost=1.0)
    _flow_rows(b, net, comms, d, lambda k, a: ("F", k, a), lambda k: b.col(("H", k)), ())
    for a, arc in enumerate(net.arcs):
        coefs = {b.col(("F", k, a)): 1.0 for k in range(len(comms))}
        b.add_row(("CAP", a), coefs, LE, arc.capacity + x[a])
    return _finish(b)


def column_count_discrete(num_arcs: int, N: int, K: int) -> int:
    return num_arcs + N * K * num_arcs + N * K + 1


__all__ = [
    "ModelError",
    "build_discrete_robust",
    "build_evaluation_flow",
    "build_nominal",
    "build_stochastic_mean",
    "check_commodities",
    "column_count_discrete",
    "intermediate_nodes",
]
