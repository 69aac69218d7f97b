"""CPLEX-style LP text writer.

Grammar of the emitted file::

    Minimize
     obj: <terms>
    Subject To
     <row>: <terms> <= | >= | = <rhs>
    Bounds                      (only when some column has non-default bounds)
     <col> free | <col> = v | lo <= <col> <= hi | -inf <= <col> <= hi
    End

A term is ``[+|-] [coef] name``; a unit coefficient is omitted.  Numbers are
printed with 17 significant digits so the file reproduces the program
exactly.  At most ``TERMS_PER_LINE`` terms go on a line; longer expressions
continue on indented lines.
"""

from __future__ import annotations

import re
from collections.abc import Sequence

import numpy as np

from .program import EQ, GE, LE, LinearProgram

TERMS_PER_LINE = 8

_BAD = re.compile(r"[^A-Za-z0-9_.]")


class LpFileError(ValueError):
    pass


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def sanitize(name: str) -> str:
    out = _BAD.sub("_", name).rstrip("_")
    if not out or out[0].isdigit() or out[0] in "eE." and len(out) > 1 and out[1:2].isdigit():
        out = "_" + out
    return out


def _terms(idx: np.ndarray, vals: np.ndarray, names: Sequence[str]) -> list[str]:
    terms = []
    for k, (j, v) in enumerate(zip(idx, vals)):
        if v == 0.0:
            continue
        sign = "-" if v < 0 else "+"
        mag = abs(v)
        body = names[j] if mag == 1.0 else f"{fmt(mag)} {names[j]}"
        if not terms and sign == "+":
            terms.append(body)
        else:
            terms.append(f"{sign} {body}")
    return terms


def _wrap(head: str, terms: list[str], tail: str = "") -> list[str]:
    if not terms:
        terms = ["0"] if tail else []
    lines = []
    for k in range(0, max(len(terms), 1), TERMS_PER_LINE):
        chunk = " ".join(terms[k:k + TERMS_PER_LINE])
        lines.append((head if k == 0 else "   ") + (" " + chunk if chunk else ""))
    if tail:
        lines[-1] += " " + tail
    return lines


def write_lp_file(lp: LinearProgram, names) -> str:
    """Render ``lp`` as LP-format text using column names from ``names``.

    ``names`` is a VariableCatalog or any sequence of strings with one entry
    per column.
    """
    col_names = list(names.names()) if hasattr(names, "names") else list(names)
    if len(col_names) != lp.num_cols:
        raise LpFileError(f"{lp.num_cols} columns but {len(col_names)} names")
    for j, nm in enumerate(col_names):
        if not nm:
            raise LpFileError(f"column {j} is unnamed")
    cols = [sanitize(str(nm)) for nm in col_names]
    if len(set(cols)) != len(cols):
        raise LpFileError("column names collide after sanitizing")
    rows = [sanitize(nm) for nm in lp.row_names] if lp.row_names else [f"c{i}" for i in range(lp.num_rows)]
    if len(set(rows)) != len(rows):
        rows = [f"c{i}" for i in range(lp.num_rows)]

    out = ["Minimize"]
    nz = np.flatnonzero(lp.c)
    out += _wrap(" obj:", _terms(nz, lp.c[nz], cols))
    out.append("Subject To")
    A = lp.A.tocsr()
    op = {LE: "<=", GE: ">=", EQ: "="}
    for i in range(lp.num_rows):
        lo, hi = A.indptr[i], A.indptr[i + 1]
        terms = _terms(A.indices[lo:hi], A.data[lo:hi], cols)
        out += _wrap(f" {rows[i]}:", terms, f"{op[lp.senses[i]]} {fmt(lp.rhs[i])}")
    bounds = []
    for j in range(lp.num_cols):
        lo, hi = lp.lb[j], lp.ub[j]
        if lo == 0.0 and hi == np.inf:
            continue
        if lo == -np.inf and hi == np.inf:
            bounds.append(f" {cols[j]} free")
        elif lo == hi:
            bounds.append(f" {cols[j]} = {fmt(lo)}")
        else:
            left = "-inf" if lo == -np.inf else fmt(lo)
            right = "+inf" if hi == np.inf else fmt(hi)
            bounds.append(f" {left} <= {cols[j]} <= {right}")
    if bounds:
        out.append("Bounds")
        out += bounds
    out.append("End")
    return "\n".join(out) + "\n"
