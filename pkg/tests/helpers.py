"""Shared test helpers."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from rncep.lp import EQ, GE, LE, LinearProgram
from rncep.sndlib_io import ScenarioSet


def random_lp(rng: np.random.Generator) -> LinearProgram:
    n = int(rng.integers(1, 7))
    m = int(rng.integers(1, 7))
    A = rng.integers(-5, 6, size=(m, n)).astype(float)
    lb = rng.integers(-5, 1, size=n).astype(float)
    ub = lb + rng.integers(1, 8, size=n)
    senses = tuple(rng.choice([LE, GE, EQ], p=[0.45, 0.4, 0.15]) for _ in range(m))
    x0 = rng.uniform(lb, ub)
    slack = rng.uniform(0, 4, size=m)
    rhs = A @ x0 + np.array([s if o == LE else -s if o == GE else 0.0 for o, s in zip(senses, slack)])
    if rng.random() < 0.2:
        rhs = rng.uniform(-20, 20, size=m)   # often infeasible
    c = rng.integers(-9, 10, size=n).astype(float)
    return LinearProgram(c, sp.csc_matrix(A), senses, rhs, lb, ub)


def scen(commodities, rows, labels=None):
    rows = np.asarray(rows, dtype=float).reshape(len(rows), -1)
    labels = labels or tuple(f"r{i}" for i in range(len(rows)))
    return ScenarioSet(tuple(commodities), rows, tuple(labels))
