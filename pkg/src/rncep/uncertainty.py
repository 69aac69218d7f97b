"""Data-driven uncertainty descriptions built from a scenario matrix.

Three descriptions are produced from training scenarios ``R`` (N x K):

* a lambda-scaled discrete set, blending each scenario with the per-commodity
  average;
* a polyhedron ``{V d <= b, lower <= d <= upper}`` whose hyperplanes are
  sampled at random and shifted until tight on the data;
* the mean of a zero-inflated uniform distribution fitted per commodity.

Commodity selection and the train/evaluation split also live here.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .sndlib_io import ScenarioSet

DEFAULT_TOL = 1e-9


class UncertaintyError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DiscreteSet:
    scenarios: np.ndarray
    lam: float
    commodities: tuple[tuple[str, str], ...] = ()

    @property
    def num_scenarios(self) -> int:
        return self.scenarios.shape[0]


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """``{d : V d <= b, lower <= d <= upper}``."""

    V: np.ndarray
    b: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    seed: int | None = None
    commodities: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        V = np.atleast_2d(np.asarray(self.V, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        lo = np.asarray(self.lower, dtype=float).reshape(-1)
        hi = np.asarray(self.upper, dtype=float).reshape(-1)
        if V.shape != (b.size, lo.size) or hi.size != lo.size:
            raise UncertaintyError(f"inconsistent polyhedron shapes V{V.shape}, b{b.shape}, bounds {lo.size}/{hi.size}")
        if np.any(lo > hi):
            raise UncertaintyError("lower bound exceeds upper bound")
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def num_rows(self) -> int:
        return self.V.shape[0]

    @property
    def dim(self) -> int:
        return self.lower.size


@dataclass(frozen=True, eq=False)
class MeanDemand:
    values: np.ndarray
    commodities: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class CommodityStats:
    count: int
    average: float
    rmin: float
    rmax: float
    degenerate: bool


# -- splitting and selection -------------------------------------------------------

def split_train_eval(R: ScenarioSet, stride: int) -> tuple[ScenarioSet, ScenarioSet]:
    """Every ``stride``-th scenario (starting at 0) trains; the rest evaluate."""
    if stride < 1:
        raise UncertaintyError("stride must be >= 1")
    if stride > R.num_scenarios:
        raise UncertaintyError(f"stride {stride} exceeds scenario count {R.num_scenarios}")
    train = list(range(0, R.num_scenarios, stride))
    held = [i for i in range(R.num_scenarios) if i % stride]
    return R.rows(train), R.rows(held)


def select_top_commodities(R: ScenarioSet, K: int) -> tuple[ScenarioSet, float]:
    """Keep the ``K`` commodities with the largest total demand.

    Ties go to the earlier commodity in canonical order, and the kept columns
    stay in canonical order.  Returns the restricted set and the fraction of
    total demand mass it retains.
    """
    if K <= 0:
        raise UncertaintyError("K must be positive")
    if K > R.num_commodities:
        raise UncertaintyError(f"K={K} exceeds commodity count {R.num_commodities}")
    totals = R.demands.sum(axis=0)
    order = np.lexsort((np.arange(totals.size), -totals))
    keep = np.sort(order[:K])
    grand = totals.sum()
    coverage = float(totals[keep].sum() / grand) if grand > 0 else 1.0
    return R.columns(keep), coverage


def coverage_curve(R: ScenarioSet, Ks) -> list[tuple[int, float]]:
    return [(int(K), select_top_commodities(R, int(K))[1]) for K in Ks]


def restrict_to(R: ScenarioSet, commodities) -> ScenarioSet:
    """Columns of ``R`` for ``commodities``; pairs missing from ``R`` read as 0."""
    col = {p: k for k, p in enumerate(R.commodities)}
    comms = tuple(tuple(p) for p in commodities)
    dem = np.zeros((R.num_scenarios, len(comms)))
    for j, p in enumerate(comms):
        if p in col:
            dem[:, j] = R.demands[:, col[p]]
    return ScenarioSet(comms, dem, R.labels)


def drop_degenerate(R: ScenarioSet) -> ScenarioSet:
    """Remove commodities whose demand is zero in every scenario."""
    keep = np.flatnonzero(R.demands.max(axis=0, initial=0.0) > 0)
    return R.columns(keep)


# -- per-commodity statistics ---------------------------------------------------------

def _matrix(R) -> np.ndarray:
    return R.demands if isinstance(R, ScenarioSet) else np.atleast_2d(np.asarray(R, dtype=float))


def commodity_stats(R, k: int) -> CommodityStats:
    """Positive count, average, smallest positive value and maximum of column ``k``.

    The average divides the sum over *all* scenarios by the positive count.
    """
    col = _matrix(R)[:, k]
    pos = col > 0
    n_pos = int(pos.sum())
    if n_pos == 0:
        return CommodityStats(0, 0.0, 0.0, 0.0, True)
    return CommodityStats(n_pos, float(col.sum() / n_pos), float(col[pos].min()), float(col.max()), False)


def _averages(D: np.ndarray) -> np.ndarray:
    n_pos = (D > 0).sum(axis=0)
    sums = D.sum(axis=0)
    return np.divide(sums, n_pos, out=np.zeros_like(sums), where=n_pos > 0)


def build_discrete_set(R, lam: float) -> DiscreteSet:
    """Scenarios ``lam * r + (1 - lam) * r_hat`` per commodity."""
    if not 0.0 <= lam <= 1.0:
        raise UncertaintyError(f"lambda must lie in [0, 1], got {lam}")
    D = _matrix(R)
    if lam == 1.0:
        scen = D.copy()
    else:
        scen = lam * D + (1.0 - lam) * _averages(D)[None, :]
    comms = R.commodities if isinstance(R, ScenarioSet) else ()
    return DiscreteSet(scen, float(lam), comms)


def build_bounds(R) -> tuple[np.ndarray, np.ndarray]:
    D = _matrix(R)
    if D.shape[0] == 0:
        raise UncertaintyError("cannot bound an empty scenario set")
    return D.min(axis=0), D.max(axis=0)


def zero_inflated_mean(R) -> MeanDemand:
    """Per-commodity mean of a uniform fit on positive values, scaled by P(d > 0)."""
    D = _matrix(R)
    N = D.shape[0]
    out = np.zeros(D.shape[1])
    for k in range(D.shape[1]):
        st = commodity_stats(D, k)
        if not st.degenerate:
            out[k] = 0.5 * (st.rmin + st.rmax) * st.count / N
    comms = R.commodities if isinstance(R, ScenarioSet) else ()
    return MeanDemand(out, comms)


# -- polyhedra -------------------------------------------------------------------------

def make_rng(seed: int) -> np.random.Generator:
    """Seeded PCG64 stream; identical draws on every platform."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def tight_rhs(R, V: np.ndarray) -> np.ndarray:
    """``b_i = max_j V_i . r^j`` so each row touches at least one scenario."""
    D = _matrix(R)
    return (np.atleast_2d(V) @ D.T).max(axis=1)


def sum_constraint(R) -> tuple[np.ndarray, float]:
    """The averaging row ``(1/K) sum_k d_k <= b`` made tight on ``R``."""
    D = _matrix(R)
    v = np.full(D.shape[1], 1.0 / D.shape[1])
    return v, float(tight_rhs(D, v)[0])


def sample_hyperplanes(R, M: int, seed: int) -> Polyhedron:
    """Polyhedron with ``M`` tight rows: the averaging row 1/K, then ``M - 1`` random rows.

    Random coefficients are i.i.d. uniform on [0, 1] from ``make_rng(seed)``.
    """
    if M < 1:
        raise UncertaintyError("need at least one hyperplane (the sum row)")
    D = _matrix(R)
    K = D.shape[1]
    rng = make_rng(seed)
    V = np.empty((M, K))
    V[0], _ = sum_constraint(D)
    if M > 1:
        V[1:] = rng.uniform(0.0, 1.0, size=(M - 1, K))
    lo, hi = build_bounds(D)
    comms = R.commodities if isinstance(R, ScenarioSet) else ()
    return Polyhedron(V, tight_rhs(D, V), lo, hi, seed=int(seed), commodities=comms)


def contains(P: Polyhedron, d, tol: float = DEFAULT_TOL) -> bool:
    d = np.asarray(d, dtype=float)
    return bool(
        np.all(P.V @ d <= P.b + tol)
        and np.all(d >= P.lower - tol)
        and np.all(d <= P.upper + tol)
    )


def point_polyhedron(d: np.ndarray, commodities=()) -> Polyhedron:
    """Singleton polyhedron ``{d}`` with the tight averaging row."""
    d = np.asarray(d, dtype=float)
    V = np.full((1, d.size), 1.0 / d.size)
    return Polyhedron(V, V @ d, d.copy(), d.copy(), commodities=tuple(commodities))


def interior_point(P: Polyhedron) -> np.ndarray:
    """A point of ``P`` (vertex average for small K, else a shrunk box midpoint)."""
    from .lp import vertex_enumerate  # local: lp does not depend on this module

    if P.dim <= 8:
        verts = vertex_enumerate(P)
        if len(verts):
            return verts.mean(axis=0)
    mid = 0.5 * (P.lower + P.upper)
    for t in np.linspace(1.0, 0.0, 41):
        p = P.lower + t * (mid - P.lower)
        if contains(P, p):
            return p
    raise UncertaintyError("could not locate a point inside the polyhedron")


def hit_and_run(P: Polyhedron, n: int, rng: np.random.Generator, start: np.ndarray | None = None,
                thin: int = 5) -> np.ndarray:
    """``n`` points of ``P`` from a hit-and-run walk."""
    x = interior_point(P) if start is None else np.asarray(start, dtype=float).copy()
    G = np.vstack([P.V, -np.eye(P.dim), np.eye(P.dim)])
    h = np.concatenate([P.b, -P.lower, P.upper])
    out = np.empty((n, P.dim))
    for i in range(n):
        for _ in range(thin):
            u = rng.normal(size=P.dim)
            u /= np.linalg.norm(u) or 1.0
            gu = G @ u
            slack = np.maximum(h - G @ x, 0.0)
            with np.errstate(divide="ignore"):
                ratios = slack / gu
            # P is bounded, so every direction meets a facet both ways
            hi = ratios[gu > 1e-14].min(initial=np.inf)
            lo = ratios[gu < -1e-14].max(initial=-np.inf)
            if not (np.isfinite(hi) and np.isfinite(lo)):
                raise UncertaintyError("hit-and-run needs a bounded polyhedron")
            x = x + rng.uniform(lo, hi) * u
        out[i] = x
    return out


# -- polyhedron CSV blocks ----------------------------------------------------------

def write_polyhedron_csv(P: Polyhedron) -> str:
    """Text with a ``#`` header line and ``[V]``, ``[b]``, ``[bounds]`` blocks."""
    f = lambda v: format(float(v), ".17g")  # noqa: E731
    lines = [f"# polyhedron M={P.num_rows} K={P.dim} seed={'' if P.seed is None else P.seed}"]
    if P.commodities:
        lines.append("# commodities " + ",".join(f"{s}:{t}" for s, t in P.commodities))
    lines.append("[V]")
    lines += [",".join(f(v) for v in row) for row in P.V]
    lines.append("[b]")
    lines += [f(v) for v in P.b]
    lines.append("[bounds]")
    lines += [f"{f(lo)},{f(hi)}" for lo, hi in zip(P.lower, P.upper)]
    return "\n".join(lines) + "\n"


def parse_polyhedron_csv(text: str) -> Polyhedron:
    seed = None
    comms: tuple = ()
    blocks: dict[str, list[str]] = {}
    cur = None
    M = K = None
    for line in io.StringIO(text):
        line = line.strip()
        if not line:
            continue
        if line.startswith("# polyhedron"):
            for tok in line.split()[2:]:
                key, _, val = tok.partition("=")
                if key == "M":
                    M = int(val)
                elif key == "K":
                    K = int(val)
                elif key == "seed" and val:
                    seed = int(val)
            continue
        if line.startswith("# commodities"):
            body = line[len("# commodities"):].strip()
            comms = tuple(tuple(p.split(":", 1)) for p in body.split(",")) if body else ()
            continue
        if line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            cur = line[1:-1]
            blocks[cur] = []
            continue
        if cur is None:
            raise UncertaintyError("data before first block")
        blocks[cur].append(line)
    if M is None or K is None or set(blocks) != {"V", "b", "bounds"}:
        raise UncertaintyError("polyhedron text needs a header and V, b, bounds blocks")
    V = np.array([[float(v) for v in r.split(",")] for r in blocks["V"]]).reshape(M, K)
    b = np.array([float(v) for v in blocks["b"]])
    bounds = np.array([[float(v) for v in r.split(",")] for r in blocks["bounds"]]).reshape(K, 2)
    return Polyhedron(V, b, bounds[:, 0], bounds[:, 1], seed=seed, commodities=comms)
