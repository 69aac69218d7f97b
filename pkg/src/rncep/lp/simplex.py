"""Bounded-variable revised simplex.

Each row ``i`` gets a logical column ``s_i`` so that ``A x + s = rhs``; the row
sense becomes a bound on ``s_i`` (``<=``: ``s >= 0``, ``>=``: ``s <= 0``,
``=``: ``s = 0``).  Phase 1 adds artificial columns only for rows whose
logical cannot absorb the initial residual, and minimizes their sum.  The
basis inverse is kept dense and updated by elementary row operations, with
periodic refactorization.

Pricing is Dantzig (largest reduced cost) with a two-pass Harris ratio test;
after ``bland_after`` consecutive degenerate pivots the solver switches to
Bland's smallest-index rule until a non-degenerate pivot occurs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .program import EQ, GE, LE, LinearProgram, LpSolution, Status

log = logging.getLogger(__name__)

_AT_LB, _AT_UB, _FREE, _BASIC = 0, 1, 2, 3


@dataclass(frozen=True)
class SolverOptions:
    feas_tol: float = 1e-7
    opt_tol: float = 1e-7
    pivot_tol: float = 1e-9
    max_iters: int | None = None
    anti_cycling: bool = True
    bland_after: int = 500
    refactor_every: int = 100
    scaling: bool = True
    backend: str = "simplex"


def solve(lp: LinearProgram, opts: SolverOptions | None = None, **kwargs) -> LpSolution:
    """Solve ``lp`` and return primal values, row duals and status.

    Keyword arguments override fields of ``opts``.  ``backend="highs"``
    delegates to SciPy's HiGHS wrapper (for instances too large for the dense
    basis inverse used here).
    """
    if opts is None:
        opts = SolverOptions(**kwargs)
    elif kwargs:
        opts = SolverOptions(**{**opts.__dict__, **kwargs})
    if opts.backend == "highs":
        return _solve_highs(lp, opts)
    if opts.backend != "simplex":
        raise ValueError(f"unknown backend {opts.backend!r}")
    return _Simplex(lp, opts).run()


def _equilibrate(A: sp.csc_matrix, passes: int = 6) -> tuple[np.ndarray, np.ndarray]:
    """Geometric-mean row/column scaling rounded to powers of two."""
    m, n = A.shape
    r = np.ones(m)
    s = np.ones(n)
    if A.nnz == 0:
        return r, s
    absA = abs(A).tocoo()
    rows, cols, vals = absA.row, absA.col, absA.data
    logv = np.log2(vals)
    for _ in range(passes):
        scaled = logv + np.log2(r)[rows] + np.log2(s)[cols]
        rmax = np.full(m, -np.inf)
        rmin = np.full(m, np.inf)
        np.maximum.at(rmax, rows, scaled)
        np.minimum.at(rmin, rows, scaled)
        has = np.isfinite(rmax)
        r[has] *= 2.0 ** (-np.round((rmax[has] + rmin[has]) / 2))
        scaled = logv + np.log2(r)[rows] + np.log2(s)[cols]
        cmax = np.full(n, -np.inf)
        cmin = np.full(n, np.inf)
        np.maximum.at(cmax, cols, scaled)
        np.minimum.at(cmin, cols, scaled)
        has = np.isfinite(cmax)
        s[has] *= 2.0 ** (-np.round((cmax[has] + cmin[has]) / 2))
    return r, s


class _Simplex:
    def __init__(self, lp: LinearProgram, opts: SolverOptions) -> None:
        self.lp = lp
        self.opts = opts
        m, n = lp.num_rows, lp.num_cols
        self.m, self.n = m, n
        if opts.scaling:
            self.rscale, self.cscale = _equilibrate(lp.A)
        else:
            self.rscale, self.cscale = np.ones(m), np.ones(n)
        A = sp.diags(self.rscale) @ lp.A @ sp.diags(self.cscale)
        self.b = lp.rhs * self.rscale
        c = lp.c * self.cscale
        lb = lp.lb / self.cscale
        ub = lp.ub / self.cscale
        slo = np.array([0.0 if s in (LE, EQ) else -np.inf for s in lp.senses])
        shi = np.array([np.inf if s == LE else 0.0 for s in lp.senses])
        self.A0 = sp.hstack([A, sp.identity(m, format="csc")], format="csc")
        self.c = np.concatenate([c, np.zeros(m)])
        self.lb = np.concatenate([lb, slo])
        self.ub = np.concatenate([ub, shi])
        self.max_iters = opts.max_iters if opts.max_iters is not None else 10 * (m + n)
        self.iterations = 0
        self.degenerate_run = 0
        self.bland_pivots = 0

    # -- setup -----------------------------------------------------------------
    def _initial_point(self) -> None:
        m, n = self.m, self.n
        ntot = n + m
        x = np.zeros(ntot)
        state = np.full(ntot, _AT_LB, dtype=np.int8)
        for j in range(n):
            if np.isfinite(self.lb[j]):
                x[j], state[j] = self.lb[j], _AT_LB
            elif np.isfinite(self.ub[j]):
                x[j], state[j] = self.ub[j], _AT_UB
            else:
                x[j], state[j] = 0.0, _FREE
        resid = self.b - self.A0[:, :n] @ x[:n]
        basic = np.empty(m, dtype=np.int64)
        art_rows, art_sign = [], []
        for i in range(m):
            j = n + i
            lo, hi = self.lb[j], self.ub[j]
            if lo - self.opts.feas_tol <= resid[i] <= hi + self.opts.feas_tol:
                x[j] = resid[i]
                state[j] = _BASIC
                basic[i] = j
            else:
                x[j] = 0.0
                state[j] = _AT_LB if lo == 0.0 else _AT_UB
                art_rows.append(i)
                art_sign.append(1.0 if resid[i] >= 0 else -1.0)
        k = len(art_rows)
        if k:
            art = sp.csc_matrix((art_sign, (art_rows, np.arange(k))), shape=(m, k))
            self.A = sp.hstack([self.A0, art], format="csc")
            x = np.concatenate([x, np.abs(resid[art_rows])])
            state = np.concatenate([state, np.full(k, _BASIC, dtype=np.int8)])
            self.lb = np.concatenate([self.lb, np.zeros(k)])
            self.ub = np.concatenate([self.ub, np.full(k, np.inf)])
            self.c = np.concatenate([self.c, np.zeros(k)])
            for t, i in enumerate(art_rows):
                basic[i] = ntot + t
        else:
            self.A = self.A0
        self.n_art = k
        self.AT = self.A.T.tocsr()
        self.x = x
        self.state = state
        self.basic = basic
        self._refactor()

    def _refactor(self) -> None:
        m = self.m
        if m == 0:
            self.Binv = np.zeros((0, 0))
            return
        B = self.A[:, self.basic].toarray()
        lu = sla.lu_factor(B, check_finite=False)
        self.Binv = sla.lu_solve(lu, np.eye(m), check_finite=False)
        nonbasic = self.state != _BASIC
        rhs = self.b - self.A[:, nonbasic] @ self.x[nonbasic]
        self.x[self.basic] = self.Binv @ rhs
        self.since_refactor = 0

    def _column(self, j: int) -> np.ndarray:
        lo, hi = self.A.indptr[j], self.A.indptr[j + 1]
        return self.Binv[:, self.A.indices[lo:hi]] @ self.A.data[lo:hi]

    # -- main loop ---------------------------------------------------------------
    def _iterate(self, cost: np.ndarray, phase: int) -> Status | None:
        """Run simplex pivots with ``cost``; return terminal status or None on success."""
        opt_tol, piv_tol = self.opts.opt_tol, self.opts.pivot_tol
        harris = self.opts.feas_tol * 1e-2
        m = self.m
        while True:
            y = cost[self.basic] @ self.Binv if m else np.zeros(0)
            d = cost - self.AT @ y
            st = self.state
            fixed = self.lb == self.ub
            inc = ((st == _AT_LB) | (st == _FREE)) & (d < -opt_tol) & ~fixed
            dec = ((st == _AT_UB) | (st == _FREE)) & (d > opt_tol) & ~fixed
            elig = np.flatnonzero(inc | dec)
            if elig.size == 0:
                self.y, self.d = y, d
                return None
            if self.iterations >= self.max_iters:
                return Status.ITERATION_LIMIT
            use_bland = self.opts.anti_cycling and self.degenerate_run >= self.opts.bland_after
            if use_bland:
                q = int(elig[0])
                self.bland_pivots += 1
            else:
                q = int(elig[np.argmax(np.abs(d[elig]))])
            direction = 1.0 if inc[q] else -1.0
            alpha = self._column(q)
            # basic values move by -direction * t * alpha
            delta = -direction * alpha
            xb = self.x[self.basic]
            lbB = self.lb[self.basic]
            ubB = self.ub[self.basic]
            down = delta < -piv_tol
            up = delta > piv_tol
            room = np.full(m, np.inf)
            room[down] = (xb[down] - lbB[down]) / -delta[down]
            room[up] = (ubB[up] - xb[up]) / delta[up]
            flip = self.ub[q] - self.lb[q]
            if use_bland:
                t_min = room.min(initial=np.inf)
                if t_min < np.inf:
                    cand = np.flatnonzero(room <= t_min + 1e-12)
                    r = int(cand[np.argmin(self.basic[cand])])
                else:
                    r = -1
            else:
                relaxed = np.full(m, np.inf)
                relaxed[down] = (xb[down] - lbB[down] + harris) / -delta[down]
                relaxed[up] = (ubB[up] - xb[up] + harris) / delta[up]
                t_max = relaxed.min(initial=np.inf)
                if t_max < np.inf:
                    cand = np.flatnonzero(room <= t_max)
                    r = int(cand[np.argmax(np.abs(delta[cand]))])
                    t_min = max(room[r], 0.0)
                else:
                    r, t_min = -1, np.inf
            if r < 0 and not np.isfinite(flip):
                return Status.UNBOUNDED
            self.iterations += 1
            if np.isfinite(flip) and flip <= t_min:
                # entering variable jumps to its opposite bound; basis unchanged
                self.x[self.basic] = xb + delta * flip
                if direction > 0:
                    self.x[q], self.state[q] = self.ub[q], _AT_UB
                else:
                    self.x[q], self.state[q] = self.lb[q], _AT_LB
                self.degenerate_run = 0
                continue
            t = max(t_min, 0.0)
            if t <= 1e-12:
                self.degenerate_run += 1
            else:
                self.degenerate_run = 0
            leave = int(self.basic[r])
            self.x[self.basic] = xb + delta * t
            self.x[q] = self.x[q] + direction * t
            if delta[r] < 0:
                self.x[leave], self.state[leave] = self.lb[leave], _AT_LB
            else:
                self.x[leave], self.state[leave] = self.ub[leave], _AT_UB
            if phase == 1 and leave >= self.n + self.m:
                self.ub[leave] = 0.0
                self.x[leave], self.state[leave] = 0.0, _AT_LB
            self.state[q] = _BASIC
            self.basic[r] = q
            piv = alpha[r]
            row = self.Binv[r] / piv
            self.Binv -= np.outer(alpha, row)
            self.Binv[r] = row
            self.since_refactor += 1
            if self.since_refactor >= self.opts.refactor_every:
                self._refactor()

    def run(self) -> LpSolution:
        self._initial_point()
        status: Status | None = None
        phase1_iters = 0
        if self.n_art:
            cost1 = np.zeros(len(self.c))
            cost1[self.n + self.m:] = 1.0
            status = self._iterate(cost1, phase=1)
            phase1_iters = self.iterations
            self._refactor()
            infeas = float(self.x[self.n + self.m:].sum())
            if status is Status.ITERATION_LIMIT:
                return self._result(Status.ITERATION_LIMIT, phase1_iters)
            if infeas > self.opts.feas_tol * max(1.0, np.abs(self.b).max(initial=0.0)):
                return self._result(Status.INFEASIBLE, phase1_iters)
            art = slice(self.n + self.m, None)
            self.ub[art] = 0.0
            self.x[art] = np.where(self.state[art] == _BASIC, self.x[art], 0.0)
            self.state[art] = np.where(self.state[art] == _BASIC, _BASIC, _AT_LB)
            self._refactor()
        self.degenerate_run = 0
        status = self._iterate(self.c, phase=2)
        if status is None:
            self._refactor()
            status = Status.OPTIMAL
        return self._result(status, phase1_iters)

    def _result(self, status: Status, phase1_iters: int) -> LpSolution:
        lp = self.lp
        n, m = self.n, self.m
        x = self.x[:n] * self.cscale
        x = np.clip(x, lp.lb, lp.ub)
        meta = {
            "phase1_iterations": phase1_iters,
            "bland_pivots": self.bland_pivots,
            "scaled": self.opts.scaling,
            "backend": "simplex",
        }
        if status is Status.OPTIMAL:
            y_s = self.c[self.basic] @ self.Binv if m else np.zeros(0)
            d_s = self.c[:n] - lp.A.T @ (y_s * self.rscale) * self.cscale if n else np.zeros(0)
            duals = y_s * self.rscale
            rc = d_s / self.cscale
            meta["primal_residual"] = lp.max_violation(x)
            gap_x = np.minimum(np.abs(x - lp.lb), np.abs(lp.ub - x))
            meta["complementarity"] = float(np.max(np.abs(rc) * np.where(np.isfinite(gap_x), gap_x, 0.0), initial=0.0))
        else:
            duals = np.full(m, np.nan)
            rc = None
        obj = float(lp.c @ x) if status is Status.OPTIMAL else float("nan")
        return LpSolution(status, x, obj, duals, self.iterations, rc, meta)


def _solve_highs(lp: LinearProgram, opts: SolverOptions) -> LpSolution:
    from scipy.optimize import linprog

    le = np.array([s == LE for s in lp.senses], dtype=bool)
    ge = np.array([s == GE for s in lp.senses], dtype=bool)
    eq = np.array([s == EQ for s in lp.senses], dtype=bool)
    A = lp.A.tocsr()
    ub_rows = np.flatnonzero(le | ge)
    sign = np.where(ge[ub_rows], -1.0, 1.0)
    A_ub = sp.diags(sign) @ A[ub_rows] if ub_rows.size else None
    b_ub = sign * lp.rhs[ub_rows] if ub_rows.size else None
    eq_rows = np.flatnonzero(eq)
    A_eq = A[eq_rows] if eq_rows.size else None
    b_eq = lp.rhs[eq_rows] if eq_rows.size else None
    bounds = np.column_stack([np.where(np.isfinite(lp.lb), lp.lb, -np.inf), lp.ub])
    bounds = [(None if not np.isfinite(lo) else lo, None if not np.isfinite(hi) else hi) for lo, hi in bounds]
    options = {"primal_feasibility_tolerance": opts.feas_tol, "dual_feasibility_tolerance": opts.opt_tol}
    if opts.max_iters is not None:
        options["maxiter"] = opts.max_iters
    res = linprog(lp.c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds,
                  method="highs", options=options)
    status = {0: Status.OPTIMAL, 1: Status.ITERATION_LIMIT, 2: Status.INFEASIBLE,
              3: Status.UNBOUNDED}.get(res.status, Status.INFEASIBLE)
    duals = np.full(lp.num_rows, np.nan)
    x = np.zeros(lp.num_cols)
    if status is Status.OPTIMAL:
        x = np.clip(res.x, lp.lb, lp.ub)
        if ub_rows.size:
            duals[ub_rows] = sign * res.ineqlin.marginals
        if eq_rows.size:
            duals[eq_rows] = res.eqlin.marginals
    iters = int(getattr(res, "nit", 0) or 0)
    obj = float(lp.c @ x) if status is Status.OPTIMAL else float("nan")
    rc = lp.c - lp.A.T @ duals if status is Status.OPTIMAL else None
    return LpSolution(status, x, obj, duals, iters, rc, {"backend": "highs"})
