"""Out-of-sample evaluation of a fixed investment and frontier assembly.

Frontier CSV columns (header fixed)::

    model,sigma,lambda,M,invest_cost,mean,max,cvar10,std

``lambda`` and ``M`` are empty when not applicable.  Rows are sorted by
(model, sigma, lambda, M), with empty fields sorting first.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .lp.program import LinearProgram, Status
from .lp.simplex import SolverOptions, solve
from .model_build.flow import build_evaluation_flow
from .sndlib_io import NetworkSpec, ScenarioSet

FRONTIER_HEADER = "model,sigma,lambda,M,invest_cost,mean,max,cvar10,std"
CVAR_ALPHA = 0.1


class EvaluationError(RuntimeError):
    pass


@dataclass
class Metrics:
    mean: float
    max: float
    cvar: float
    std: float


@dataclass
class EvaluationReport:
    investment_cost: float
    per_scenario_outsourced: np.ndarray
    metrics: Metrics
    labels: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "investment_cost": self.investment_cost,
            "per_scenario_outsourced": [float(v) for v in self.per_scenario_outsourced],
            "labels": list(self.labels),
            "metrics": asdict(self.metrics),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationReport":
        return cls(
            investment_cost=float(d["investment_cost"]),
            per_scenario_outsourced=np.array(d["per_scenario_outsourced"], dtype=float),
            metrics=Metrics(**d["metrics"]),
            labels=tuple(d.get("labels", ())),
        )


@dataclass
class FrontierPoint:
    model: str
    sigma: float
    invest_cost: float
    metrics: Metrics
    lam: float | None = None
    M: int | None = None
    extra: dict = field(default_factory=dict)


def investment_cost(net: NetworkSpec, x) -> float:
    return math.fsum(c * v for c, v in zip(net.costs, np.asarray(x, dtype=float)))


def evaluate_investment(net: NetworkSpec, x, scenarios: ScenarioSet,
                        opts: SolverOptions | None = None) -> EvaluationReport:
    """Re-optimize flows per scenario with ``x`` fixed and record outsourced demand."""
    x = np.asarray(x, dtype=float)
    if scenarios.num_scenarios == 0:
        raise EvaluationError("no evaluation scenarios")
    comms = scenarios.commodities
    base, cat = build_evaluation_flow(net, comms, x, scenarios.demands[0])
    out_rows = cat.row_family("OUT")
    out = np.empty(scenarios.num_scenarios)
    for i, d in enumerate(scenarios.demands):
        rhs = base.rhs.copy()
        rhs[out_rows] = d
        lp = LinearProgram(base.c, base.A, base.senses, rhs, base.lb, base.ub, base.row_names)
        sol = solve(lp, opts)
        if sol.status is not Status.OPTIMAL:
            # outsourcing everything is always feasible, so this is a solver failure
            raise EvaluationError(f"scenario {scenarios.labels[i]}: flow LP ended {sol.status.value}")
        out[i] = max(sol.objective, 0.0)
    return EvaluationReport(investment_cost(net, x), out, metrics(out), scenarios.labels)


def tail_size(n: int, alpha: float) -> int:
    # guard against 0.1 * 30 == 3.0000000000000004
    return max(1, math.ceil(alpha * n - 1e-9))


def cvar(values, alpha: float = CVAR_ALPHA) -> float:
    """Mean of the ``ceil(alpha * n)`` largest values."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("cvar of an empty vector")
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    tail = np.sort(v)[::-1][: tail_size(v.size, alpha)]
    return float(np.mean(tail))


def metrics(values) -> Metrics:
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("metrics of an empty vector")
    return Metrics(float(v.mean()), float(v.max()), cvar(v, CVAR_ALPHA), float(v.std()))


def correlation(a, b) -> float:
    """Pearson correlation coefficient."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size != b.size or a.size < 2:
        raise ValueError("correlation needs two vectors of equal length >= 2")
    da, db = a - a.mean(), b - b.mean()
    saa, sbb = float(da @ da), float(db @ db)
    if saa == 0.0 or sbb == 0.0:
        raise ValueError("correlation is undefined for a constant vector")
    # one square root of the product keeps corr(v, v) exactly 1
    return float(np.clip(float(da @ db) / math.sqrt(saa * sbb), -1.0, 1.0))


# -- frontier CSV -------------------------------------------------------------------

def _f(v) -> str:
    return "" if v is None else format(float(v), ".17g")


def _sort_key(p: FrontierPoint):
    return (p.model, p.sigma, -math.inf if p.lam is None else p.lam, -1 if p.M is None else p.M)


def frontier(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    buf.write(FRONTIER_HEADER + "\n")
    for p in sorted(points, key=_sort_key):
        m = p.metrics
        w.writerow([p.model, _f(p.sigma), _f(p.lam), "" if p.M is None else str(int(p.M)),
                    _f(p.invest_cost), _f(m.mean), _f(m.max), _f(m.cvar), _f(m.std)])
    return buf.getvalue()


def parse_frontier(text: str) -> list[FrontierPoint]:
    lines = text.splitlines()
    if not lines or lines[0] != FRONTIER_HEADER:
        raise ValueError("not a frontier CSV (header mismatch)")
    pts = []
    for row in csv.reader(lines[1:]):
        if not row:
            continue
        model, sigma, lam, M, inv, mean, mx, cv, sd = row
        pts.append(FrontierPoint(
            model=model, sigma=float(sigma), invest_cost=float(inv),
            metrics=Metrics(float(mean), float(mx), float(cv), float(sd)),
            lam=float(lam) if lam else None, M=int(M) if M else None,
        ))
    return pts
