"""Sparse linear program container and solution record."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.sparse as sp

LE = "<="
GE = ">="
EQ = "="
SENSES = (LE, GE, EQ)


class LpError(ValueError):
    """Raised for malformed linear programs."""


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    ITERATION_LIMIT = "IterationLimit"


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """Minimize ``c @ x`` subject to ``A x (senses) rhs`` and ``lb <= x <= ub``.

    ``A`` is stored column-major (CSC).  Arrays are made read-only on
    construction so an instance can be shared between threads.
    """

    c: np.ndarray
    A: sp.csc_matrix
    senses: tuple[str, ...]
    rhs: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    row_names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        c = np.asarray(self.c, dtype=float).copy()
        rhs = np.asarray(self.rhs, dtype=float).copy()
        lb = np.asarray(self.lb, dtype=float).copy()
        ub = np.asarray(self.ub, dtype=float).copy()
        A = sp.csc_matrix(self.A, dtype=float, copy=True)
        A.sum_duplicates()
        A.sort_indices()
        m, n = A.shape
        if c.shape != (n,) or lb.shape != (n,) or ub.shape != (n,):
            raise LpError(f"column arrays must have length {n}")
        if rhs.shape != (m,) or len(self.senses) != m:
            raise LpError(f"row arrays must have length {m}")
        if not np.all(np.isfinite(c)) or not np.all(np.isfinite(A.data)):
            raise LpError("objective and matrix coefficients must be finite")
        if not np.all(np.isfinite(rhs)):
            raise LpError("right-hand sides must be finite")
        if np.any(np.isnan(lb)) or np.any(np.isnan(ub)) or np.any(lb > ub):
            raise LpError("column bounds must satisfy lb <= ub")
        if np.any(lb == np.inf) or np.any(ub == -np.inf):
            raise LpError("column bounds must admit a finite value")
        bad = [s for s in self.senses if s not in SENSES]
        if bad:
            raise LpError(f"unknown row sense {bad[0]!r}")
        if self.row_names is not None and len(self.row_names) != m:
            raise LpError("row_names length mismatch")
        for arr in (c, rhs, lb, ub, A.data, A.indices, A.indptr):
            arr.flags.writeable = False
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "lb", lb)
        object.__setattr__(self, "ub", ub)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "senses", tuple(self.senses))

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    @property
    def num_cols(self) -> int:
        return self.A.shape[1]

    def objective(self, x: np.ndarray) -> float:
        return float(self.c @ x)

    def residuals(self, x: np.ndarray) -> np.ndarray:
        """Per-row constraint violation (0 where satisfied)."""
        act = self.A @ x
        viol = np.zeros(self.num_rows)
        for i, s in enumerate(self.senses):
            if s == LE:
                viol[i] = max(0.0, act[i] - self.rhs[i])
            elif s == GE:
                viol[i] = max(0.0, self.rhs[i] - act[i])
            else:
                viol[i] = abs(act[i] - self.rhs[i])
        return viol

    def max_violation(self, x: np.ndarray) -> float:
        """Largest row or bound violation of ``x``."""
        x = np.asarray(x, dtype=float)
        rows = self.residuals(x).max(initial=0.0)
        bounds = max(np.max(self.lb - x, initial=0.0), np.max(x - self.ub, initial=0.0))
        return float(max(rows, bounds))

    def with_bounds(self, lb: np.ndarray, ub: np.ndarray) -> "LinearProgram":
        return LinearProgram(self.c, self.A, self.senses, self.rhs, lb, ub, self.row_names)

    def with_objective(self, c: np.ndarray) -> "LinearProgram":
        return LinearProgram(c, self.A, self.senses, self.rhs, self.lb, self.ub, self.row_names)


@dataclass
class LpSolution:
    status: Status
    x: np.ndarray
    objective: float
    duals: np.ndarray
    iterations: int
    reduced_costs: np.ndarray | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class LpBuilder:
    """Accumulates columns and rows as triplets, then freezes to a LinearProgram.

    Columns and rows are identified by hashable keys; the insertion order is the
    column/row order of the resulting program.
    """

    def __init__(self) -> None:
        self.col_keys: list[Any] = []
        self._col_index: dict[Any, int] = {}
        self._c: list[float] = []
        self._lb: list[float] = []
        self._ub: list[float] = []
        self.row_keys: list[Any] = []
        self._row_index: dict[Any, int] = {}
        self._senses: list[str] = []
        self._rhs: list[float] = []
        self._ri: list[int] = []
        self._ci: list[int] = []
        self._v: list[float] = []

    def add_col(self, key: Any, cost: float = 0.0, lb: float = 0.0, ub: float = np.inf) -> int:
        if key in self._col_index:
            raise LpError(f"duplicate column key {key!r}")
        j = len(self.col_keys)
        self._col_index[key] = j
        self.col_keys.append(key)
        self._c.append(float(cost))
        self._lb.append(float(lb))
        self._ub.append(float(ub))
        return j

    def col(self, key: Any) -> int:
        return self._col_index[key]

    def add_row(self, key: Any, coefs: dict[int, float], sense: str, rhs: float) -> int:
        """Add a row; ``coefs`` maps column index to coefficient (zeros dropped)."""
        if key in self._row_index:
            raise LpError(f"duplicate row key {key!r}")
        if sense not in SENSES:
            raise LpError(f"unknown row sense {sense!r}")
        i = len(self.row_keys)
        self._row_index[key] = i
        self.row_keys.append(key)
        self._senses.append(sense)
        self._rhs.append(float(rhs))
        for j in sorted(coefs):
            v = coefs[j]
            if v != 0.0:
                self._ri.append(i)
                self._ci.append(j)
                self._v.append(float(v))
        return i

    def build(self) -> LinearProgram:
        m, n = len(self.row_keys), len(self.col_keys)
        A = sp.csc_matrix((self._v, (self._ri, self._ci)), shape=(m, n))
        return LinearProgram(
            c=np.array(self._c),
            A=A,
            senses=tuple(self._senses),
            rhs=np.array(self._rhs),
            lb=np.array(self._lb),
            ub=np.array(self._ub),
            row_names=tuple(_key_name(k) for k in self.row_keys),
        )


def _key_name(key: Any) -> str:
    if isinstance(key, tuple):
        head, *rest = key
        return f"{head}({','.join(str(r) for r in rest)})" if rest else str(head)
    return str(key)


key_name = _key_name
