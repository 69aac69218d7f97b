"""Brute-force vertex enumeration for small polytopes (test oracle)."""

from __future__ import annotations

import itertools

import numpy as np

from .program import GE, LE, LinearProgram

MAX_DIM = 8


class DimensionError(ValueError):
    pass


def enumerate_vertices(
    G: np.ndarray,
    h: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    E: np.ndarray | None = None,
    e: np.ndarray | None = None,
    tol: float = 1e-9,
    max_dim: int = MAX_DIM,
) -> np.ndarray:
    """All basic feasible points of ``{G x <= h, E x = e, lower <= x <= upper}``.

    Every choice of ``n`` linearly independent active constraints (all
    equalities plus a subset of the inequalities and bounds) is solved; feasible
    solutions are kept and deduplicated within ``tol``.  Bounds must be finite.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    n = lower.size
    if n > max_dim:
        raise DimensionError(f"dimension {n} exceeds enumeration cap {max_dim}")
    if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
        raise ValueError("vertex enumeration needs finite bounds")
    G = np.asarray(G, dtype=float).reshape(-1, n)
    h = np.asarray(h, dtype=float).reshape(-1)
    E = np.zeros((0, n)) if E is None else np.asarray(E, dtype=float).reshape(-1, n)
    e = np.zeros(0) if e is None else np.asarray(e, dtype=float).reshape(-1)
    if n == 0:
        ok = np.all(h >= -tol) and np.all(np.abs(e) <= tol)
        return np.zeros((1 if ok else 0, 0))
    eye = np.eye(n)
    # equalities enter once as active candidates; feasibility is checked on both sides
    ineq_A = np.vstack([G, -eye, eye])
    ineq_b = np.concatenate([h, -lower, upper])
    cand_A = np.vstack([E, ineq_A])
    cand_b = np.concatenate([e, ineq_b])
    combos = np.array(list(itertools.combinations(range(cand_A.shape[0]), n)), dtype=np.int64)
    if combos.size == 0:
        return np.zeros((0, n))
    mats = cand_A[combos]
    rhs = cand_b[combos]
    det = np.linalg.det(mats)
    scale = np.prod(np.maximum(np.abs(mats).max(axis=2), 1e-300), axis=1)
    good = np.abs(det) > 1e-10 * scale
    if not np.any(good):
        return np.zeros((0, n))
    pts = np.linalg.solve(mats[good], rhs[good][..., None])[..., 0]
    slack_tol = tol * (1.0 + np.abs(ineq_b))
    feas = np.all(pts @ ineq_A.T <= ineq_b + slack_tol, axis=1)
    if E.shape[0]:
        feas &= np.all(np.abs(pts @ E.T - e) <= tol * (1.0 + np.abs(e)), axis=1)
    pts = pts[feas]
    return _dedupe(pts, tol)


def _dedupe(pts: np.ndarray, tol: float) -> np.ndarray:
    if len(pts) == 0:
        return pts
    kept: list[np.ndarray] = []
    for p in pts[np.lexsort(pts.T[::-1])]:
        if not any(np.max(np.abs(p - q)) <= tol * (1.0 + np.max(np.abs(q))) for q in kept):
            kept.append(p)
    return np.array(kept)


def vertex_enumerate(P, tol: float = 1e-9) -> np.ndarray:
    """Vertices of ``{V d <= b, lower <= d <= upper}`` for a Polyhedron ``P``."""
    return enumerate_vertices(P.V, P.b, P.lower, P.upper, tol=tol)


def lp_vertex_optimum(lp: LinearProgram, tol: float = 1e-9) -> float | None:
    """Minimum of ``lp`` over its enumerated vertices, or None when infeasible."""
    A = lp.A.toarray()
    G_rows, h_rows, E_rows, e_rows = [], [], [], []
    for i, s in enumerate(lp.senses):
        if s == LE:
            G_rows.append(A[i]); h_rows.append(lp.rhs[i])
        elif s == GE:
            G_rows.append(-A[i]); h_rows.append(-lp.rhs[i])
        else:
            E_rows.append(A[i]); e_rows.append(lp.rhs[i])
    n = lp.num_cols
    verts = enumerate_vertices(
        np.array(G_rows).reshape(-1, n), np.array(h_rows),
        lp.lb, lp.ub,
        np.array(E_rows).reshape(-1, n) if E_rows else None,
        np.array(e_rows) if e_rows else None,
        tol=tol,
    )
    if len(verts) == 0:
        return None
    return float(np.min(verts @ lp.c))
