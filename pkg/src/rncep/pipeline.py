"""Experiment pipeline: ingest, split, truncate, build sets, solve grids, evaluate.

Configuration is a YAML file::

    network: path/to/network.txt          # SNDlib native; relative to the config file
    scenarios: path/to/dir-or.csv         # demand directory or scenario CSV
    train_stride: 12
    seed: 1                               # RNCEP_SEED overrides
    output: out                           # relative to the config file
    jobs: 1                               # worker processes for grid points
    solver: {backend: simplex, feas_tol: 1.0e-7, opt_tol: 1.0e-7, max_iters: null, scaling: true}
    evaluation: {commodities: 400}        # default: largest experiment K
    experiments:
      - name: discrete2                   # frontier "model" column; defaults to model
        model: discrete                   # nominal | discrete | stochastic | aarc
        commodities: 400
        sigma: [0, 2490, 4980]            # or {start: 0, stop: 24900, num: 11}
        lambda: [0.5, 1.0]                # discrete only
        hyperplanes: [1, 2]               # aarc only: rows incl. the averaging row

Output directory layout::

    sets/train.csv, sets/eval.csv               split (eval restricted to evaluation K)
    sets/train_K<K>.csv                         truncated training data per K
    sets/polyhedron_K<K>_M<M>.csv               sampled polyhedra
    solutions/<tag>.json, solutions/<tag>.x.csv first-stage results
    reports/<tag>.json                          evaluation reports
    frontier.csv                                one row per grid point
    manifest.json                               seed, config hash, inputs, per-point records
    FAILED                                      only when a point failed
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from . import __version__
from . import uncertainty as unc
from .evaluate import EvaluationReport, FrontierPoint, Metrics, evaluate_investment, frontier, investment_cost
from .lp.lpfile import write_lp_file
from .lp.program import Status
from .lp.simplex import SolverOptions, solve
from .model_build import (
    build_aarc,
    build_discrete_robust,
    build_nominal,
    build_stochastic_mean,
    extract_first_stage,
    recourse_worst_case,
    worst_case_outsourcing,
)
from .sndlib_io import NetworkSpec, ScenarioSet, parse_scenario_csv, read_network, read_scenarios, write_scenario_csv

log = logging.getLogger(__name__)

MODELS = ("nominal", "discrete", "stochastic", "aarc")
SEED_ENV = "RNCEP_SEED"


class ConfigError(ValueError):
    pass


class StageDependencyError(RuntimeError):
    pass


@dataclass
class ExperimentSpec:
    name: str
    model: str
    commodities: int
    sigma: list[float]
    lam: list[float] = field(default_factory=list)
    hyperplanes: list[int] = field(default_factory=list)


@dataclass
class ExperimentConfig:
    network: Path
    scenarios: Path
    output: Path
    train_stride: int = 12
    seed: int = 0
    jobs: int = 1
    solver: dict = field(default_factory=dict)
    eval_commodities: int | None = None
    experiments: list[ExperimentSpec] = field(default_factory=list)

    def solver_options(self) -> SolverOptions:
        return SolverOptions(**self.solver)

    def canonical(self) -> dict:
        """Config content that determines results (paths reduced to names)."""
        d = asdict(self)
        d["network"] = self.network.name
        d["scenarios"] = self.scenarios.name
        d.pop("output")
        d.pop("jobs")
        return d

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()


def _grid(value, what: str) -> list[float]:
    if isinstance(value, dict):
        try:
            return [float(v) for v in np.linspace(value["start"], value["stop"], int(value["num"]))]
        except KeyError as e:
            raise ConfigError(f"{what} range needs start/stop/num, missing {e}") from None
    if isinstance(value, (int, float)):
        return [float(value)]
    if not isinstance(value, list):
        raise ConfigError(f"{what} must be a list or a start/stop/num mapping")
    return [float(v) for v in value]


DEFAULT_SIGMA = {"start": 0, "stop": 24900, "num": 11}


def parse_config(data: dict, base: Path = Path(".")) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    for key in ("network", "scenarios", "experiments"):
        if key not in data:
            raise ConfigError(f"config is missing '{key}'")
    known = {"network", "scenarios", "train_stride", "seed", "output", "jobs", "solver", "evaluation", "experiments"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    seed = int(os.environ.get(SEED_ENV, data.get("seed", 0)))
    exps = []
    for i, e in enumerate(data["experiments"] or []):
        model = e.get("model")
        if model not in MODELS:
            raise ConfigError(f"experiment {i}: model must be one of {MODELS}")
        sig = _grid(e.get("sigma", DEFAULT_SIGMA), "sigma")
        lam = _grid(e.get("lambda", [1.0]), "lambda") if model == "discrete" else []
        hyp = [int(v) for v in _grid(e.get("hyperplanes", [1]), "hyperplanes")] if model == "aarc" else []
        K = int(e.get("commodities", 0))
        spec = ExperimentSpec(str(e.get("name", model)), model, K, sig, lam, hyp)
        _validate_experiment(spec, i)
        exps.append(spec)
    if not exps:
        raise ConfigError("no experiments configured")
    names = [e.name for e in exps]
    if len(set(names)) != len(names):
        raise ConfigError("experiment names must be unique")
    solver = dict(data.get("solver") or {})
    bad = set(solver) - set(SolverOptions.__dataclass_fields__)
    if bad:
        raise ConfigError(f"unknown solver options {sorted(bad)}")
    stride = int(data.get("train_stride", 12))
    if stride < 1:
        raise ConfigError("train_stride must be >= 1")
    jobs = int(data.get("jobs", 1))
    if jobs < 1:
        raise ConfigError("jobs must be >= 1")
    ev = data.get("evaluation") or {}
    ke = ev.get("commodities")
    if ke is not None and int(ke) < 1:
        raise ConfigError("evaluation.commodities must be >= 1")
    return ExperimentConfig(
        network=(base / data["network"]).resolve(),
        scenarios=(base / data["scenarios"]).resolve(),
        output=(base / data.get("output", "out")).resolve(),
        train_stride=stride,
        seed=seed,
        jobs=jobs,
        solver=solver,
        eval_commodities=None if ke is None else int(ke),
        experiments=exps,
    )


def _validate_experiment(e: ExperimentSpec, i: int) -> None:
    if e.commodities < 1:
        raise ConfigError(f"experiment {e.name}: commodities must be >= 1")
    if not e.sigma:
        raise ConfigError(f"experiment {e.name}: sigma grid is empty")
    if any(s < 0 for s in e.sigma):
        raise ConfigError(f"experiment {e.name}: sigma values must be >= 0")
    if e.model == "discrete":
        if not e.lam:
            raise ConfigError(f"experiment {e.name}: lambda grid is empty")
        if any(not 0.0 <= v <= 1.0 for v in e.lam):
            raise ConfigError(f"experiment {e.name}: lambda values must lie in [0, 1]")
    if e.model == "aarc":
        if not e.hyperplanes:
            raise ConfigError(f"experiment {e.name}: hyperplane grid is empty")
        if any(m < 1 for m in e.hyperplanes):
            raise ConfigError(f"experiment {e.name}: hyperplane counts must be >= 1")


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    return parse_config(data, path.parent)


# -- grid points -----------------------------------------------------------------------

@dataclass(frozen=True)
class GridPoint:
    experiment: str
    model: str
    K: int
    sigma: float
    lam: float | None = None
    M: int | None = None

    @property
    def tag(self) -> str:
        parts = [self.experiment, f"K{self.K}", f"sigma{self.sigma:g}"]
        if self.lam is not None:
            parts.append(f"lambda{self.lam:g}")
        if self.M is not None:
            parts.append(f"M{self.M}")
        return "__".join(parts)


def grid_points(cfg: ExperimentConfig) -> list[GridPoint]:
    pts = []
    for e in cfg.experiments:
        for s in e.sigma:
            if e.model == "discrete":
                pts += [GridPoint(e.name, e.model, e.commodities, s, lam=l) for l in e.lam]
            elif e.model == "aarc":
                pts += [GridPoint(e.name, e.model, e.commodities, s, M=m) for m in e.hyperplanes]
            else:
                pts.append(GridPoint(e.name, e.model, e.commodities, s))
    return pts


@dataclass
class SolvedModel:
    point: GridPoint
    status: str
    objective: float
    iterations: int
    x: np.ndarray
    invest_cost: float
    worst_case_outsourced: float
    lp_size: tuple[int, int]


def truncated_training(train: ScenarioSet, K: int) -> tuple[ScenarioSet, float]:
    """Top-K commodities of the training data, all-zero columns removed."""
    K = min(K, train.num_commodities)
    sub, cov = unc.select_top_commodities(train, K)
    return unc.drop_degenerate(sub), cov


def build_model(net: NetworkSpec, train: ScenarioSet, point: GridPoint, seed: int):
    """LP, catalog and (for aarc) polyhedron for one grid point."""
    data, _ = truncated_training(train, point.K)
    P = None
    if point.model == "discrete":
        lp, cat = build_discrete_robust(net, unc.build_discrete_set(data, point.lam), point.sigma)
    elif point.model == "stochastic":
        lp, cat = build_stochastic_mean(net, unc.zero_inflated_mean(data), point.sigma)
    elif point.model == "nominal":
        lp, cat = build_nominal(net, data.commodities, data.demands.mean(axis=0), point.sigma)
    elif point.model == "aarc":
        P = unc.sample_hyperplanes(data, point.M, seed)
        lp, cat = build_aarc(net, P, point.sigma)
    else:
        raise ConfigError(f"unknown model {point.model}")
    return lp, cat, P


def solve_point(net: NetworkSpec, train: ScenarioSet, point: GridPoint, seed: int,
                opts: SolverOptions) -> SolvedModel:
    lp, cat, P = build_model(net, train, point, seed)
    sol = solve(lp, opts)
    if sol.status is not Status.OPTIMAL:
        raise RuntimeError(f"{point.tag}: solver ended with {sol.status.value} after {sol.iterations} iterations")
    x = extract_first_stage(sol, cat)
    if point.sigma > 0:
        tau = worst_case_outsourcing(sol, cat, P)
    else:
        # nothing prices outsourcing at sigma = 0; report the least worst case for x
        lp1, cat1, _ = build_model(net, train, replace(point, sigma=1.0), seed)
        tau = recourse_worst_case(lp1, cat1, x, opts)
    return SolvedModel(point, sol.status.value, sol.objective, sol.iterations, x,
                       investment_cost(net, x), tau, (lp.num_rows, lp.num_cols))


def solution_dict(net: NetworkSpec, sm: SolvedModel, seed: int) -> dict:
    p = sm.point
    return {
        "tag": p.tag,
        "experiment": p.experiment,
        "model": p.model,
        "K": p.K,
        "sigma": p.sigma,
        "lambda": p.lam,
        "M": p.M,
        "seed": seed if p.model == "aarc" else None,
        "status": sm.status,
        "objective": sm.objective,
        "iterations": sm.iterations,
        "lp_rows": sm.lp_size[0],
        "lp_cols": sm.lp_size[1],
        "invest_cost": sm.invest_cost,
        "worst_case_outsourced": sm.worst_case_outsourced,
        "arcs": [[a.id, a.tail, a.head] for a in net.arcs],
        "x": [float(v) for v in sm.x],
    }


def write_json(path: Path, obj: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def write_x_csv(path: Path, net: NetworkSpec, x) -> None:
    lines = ["arc,tail,head,x"]
    lines += [f"{a.id},{a.tail},{a.head},{format(float(v), '.17g')}" for a, v in zip(net.arcs, x)]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_x_csv(path: Path, net: NetworkSpec) -> np.ndarray:
    rows = path.read_text(encoding="utf-8").splitlines()
    if not rows or rows[0] != "arc,tail,head,x":
        raise ValueError(f"{path}: expected header arc,tail,head,x")
    vals = {}
    for r in rows[1:]:
        if r.strip():
            aid, _, _, v = r.split(",")
            vals[aid] = float(v)
    missing = [a.id for a in net.arcs if a.id not in vals]
    if missing:
        raise ValueError(f"{path}: no investment for arcs {missing[:5]}")
    return np.array([vals[a.id] for a in net.arcs])


def _file_digest(path: Path) -> str:
    h = hashlib.sha256()
    if path.is_dir():
        for f in sorted(p for p in path.iterdir() if p.is_file()):
            h.update(f.name.encode())
            h.update(f.read_bytes())
    else:
        h.update(path.read_bytes())
    return h.hexdigest()


# -- full run --------------------------------------------------------------------------

@dataclass
class PreparedData:
    net: NetworkSpec
    scenarios: ScenarioSet
    train: ScenarioSet
    eval: ScenarioSet
    eval_full: ScenarioSet


def prepare_data(cfg: ExperimentConfig) -> PreparedData:
    net = read_network(cfg.network)
    scen = read_scenarios(cfg.scenarios, net)
    train, held = unc.split_train_eval(scen, cfg.train_stride)
    K_eval = cfg.eval_commodities or max(e.commodities for e in cfg.experiments)
    K_eval = min(K_eval, train.num_commodities)
    top, _ = unc.select_top_commodities(train, K_eval)
    return PreparedData(net, scen, train, unc.restrict_to(held, top.commodities), held)


def _run_point(args) -> tuple[dict, dict | None, str | None]:
    net, train, eval_set, point, seed, opts = args
    try:
        sm = solve_point(net, train, point, seed, opts)
        rep = evaluate_investment(net, sm.x, eval_set, opts)
        return solution_dict(net, sm, seed), rep.to_dict(), None
    except Exception as exc:  # reported per point, run continues
        return {"tag": point.tag, "status": "Failed"}, None, f"{point.tag}: {exc}\n{traceback.format_exc()}"


def run_experiment(cfg: ExperimentConfig) -> int:
    """Run every grid point and write artifacts under ``cfg.output``; returns an exit status."""
    out = cfg.output
    out.mkdir(parents=True, exist_ok=True)
    failed_marker = out / "FAILED"
    if failed_marker.exists():
        failed_marker.unlink()
    data = prepare_data(cfg)
    sets = out / "sets"
    sets.mkdir(exist_ok=True)
    (sets / "train.csv").write_text(write_scenario_csv(data.train), encoding="utf-8")
    (sets / "eval.csv").write_text(write_scenario_csv(data.eval), encoding="utf-8")
    coverage = {}
    for K in sorted({e.commodities for e in cfg.experiments}):
        tr, cov = truncated_training(data.train, K)
        coverage[str(K)] = cov
        (sets / f"train_K{K}.csv").write_text(write_scenario_csv(tr), encoding="utf-8")
    for e in cfg.experiments:
        if e.model == "aarc":
            tr, _ = truncated_training(data.train, e.commodities)
            for M in e.hyperplanes:
                P = unc.sample_hyperplanes(tr, M, cfg.seed)
                (sets / f"polyhedron_K{e.commodities}_M{M}.csv").write_text(unc.write_polyhedron_csv(P))

    opts = cfg.solver_options()
    points = grid_points(cfg)
    args = [(data.net, data.train, data.eval, p, cfg.seed, opts) for p in points]
    if cfg.jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run_point, args))
    else:
        results = [_run_point(a) for a in args]

    frontier_pts, records, errors = [], [], []
    for p, (sol, rep, err) in zip(points, results):
        rec = {"tag": p.tag, "experiment": p.experiment, "model": p.model, "K": p.K,
               "sigma": p.sigma, "lambda": p.lam, "M": p.M}
        if err is not None:
            errors.append(err)
            rec["status"] = "Failed"
            records.append(rec)
            continue
        write_json(out / "solutions" / f"{p.tag}.json", sol)
        write_x_csv(out / "solutions" / f"{p.tag}.x.csv", data.net, sol["x"])
        report = {**rep, "tag": p.tag, "experiment": p.experiment, "model": p.model,
                  "sigma": p.sigma, "lambda": p.lam, "M": p.M}
        write_json(out / "reports" / f"{p.tag}.json", report)
        rec.update(status=sol["status"], objective=sol["objective"], invest_cost=sol["invest_cost"],
                   solution=f"solutions/{p.tag}.json", report=f"reports/{p.tag}.json")
        records.append(rec)
        frontier_pts.append(FrontierPoint(p.experiment, p.sigma, sol["invest_cost"],
                                          Metrics(**rep["metrics"]), p.lam, p.M))
    (out / "frontier.csv").write_text(frontier(frontier_pts), encoding="utf-8")
    manifest = {
        "version": __version__,
        "seed": cfg.seed,
        "config_sha256": cfg.digest(),
        "config": cfg.canonical(),
        "inputs": {"network": _file_digest(cfg.network), "scenarios": _file_digest(cfg.scenarios)},
        "counts": {"scenarios": data.scenarios.num_scenarios, "train": data.train.num_scenarios,
                   "eval": data.eval.num_scenarios, "eval_commodities": data.eval.num_commodities,
                   "arcs": data.net.num_arcs, "nodes": len(data.net.nodes)},
        "coverage": coverage,
        "points": records,
    }
    write_json(out / "manifest.json", manifest)
    if errors:
        failed_marker.write_text("\n".join(errors), encoding="utf-8")
        for e in errors:
            log.error(e.splitlines()[0])
        return 1
    return 0


# -- stage helpers (used by the CLI subcommands) -------------------------------------

def stage_parse(network: Path, scenarios: Path, work: Path) -> dict:
    net = read_network(network)
    scen = read_scenarios(scenarios, net)
    work.mkdir(parents=True, exist_ok=True)
    write_json(work / "network.json", net.to_dict())
    (work / "scenarios.csv").write_text(write_scenario_csv(scen), encoding="utf-8")
    info = {"nodes": len(net.nodes), "arcs": net.num_arcs, "scenarios": scen.num_scenarios,
            "commodities": scen.num_commodities}
    write_json(work / "parse.json", info)
    return info


def _require(path: Path, stage: str) -> Path:
    if not path.exists():
        raise StageDependencyError(f"missing {path}; run the '{stage}' stage first")
    return path


def load_work_network(work: Path) -> NetworkSpec:
    p = _require(work / "network.json", "parse")
    return NetworkSpec.from_dict(json.loads(p.read_text(encoding="utf-8")))


def load_work_csv(work: Path, rel: str, stage: str) -> ScenarioSet:
    p = _require(work / rel, stage)
    return parse_scenario_csv(p.read_text(encoding="utf-8"), source=str(p))


def stage_build_sets(work: Path, stride: int, Ks: list[int], eval_K: int | None,
                     lambdas: list[float], hyperplanes: list[int], seed: int) -> dict:
    load_work_network(work)
    scen = load_work_csv(work, "scenarios.csv", "parse")
    train, held = unc.split_train_eval(scen, stride)
    sets = work / "sets"
    sets.mkdir(exist_ok=True)
    K_eval = min(eval_K or max(Ks), train.num_commodities)
    top, _ = unc.select_top_commodities(train, K_eval)
    (sets / "train.csv").write_text(write_scenario_csv(train), encoding="utf-8")
    (sets / "eval.csv").write_text(write_scenario_csv(unc.restrict_to(held, top.commodities)), encoding="utf-8")
    info: dict = {"stride": stride, "seed": seed, "train": train.num_scenarios, "eval": held.num_scenarios,
                  "coverage": {}, "files": []}
    for K in Ks:
        tr, cov = truncated_training(train, K)
        info["coverage"][str(K)] = cov
        f = f"train_K{K}.csv"
        (sets / f).write_text(write_scenario_csv(tr), encoding="utf-8")
        info["files"].append(f)
        for lam in lambdas:
            D = unc.build_discrete_set(tr, lam)
            f = f"discrete_K{K}_lambda{lam:g}.csv"
            (sets / f).write_text(write_scenario_csv(ScenarioSet(tr.commodities, D.scenarios, tr.labels)))
            info["files"].append(f)
        for M in hyperplanes:
            f = f"polyhedron_K{K}_M{M}.csv"
            (sets / f).write_text(unc.write_polyhedron_csv(unc.sample_hyperplanes(tr, M, seed)))
            info["files"].append(f)
        mean = unc.zero_inflated_mean(tr)
        f = f"mean_K{K}.csv"
        (sets / f).write_text(write_scenario_csv(ScenarioSet(tr.commodities, mean.values[None, :], ("mean",))))
        info["files"].append(f)
    write_json(sets / "sets.json", info)
    return info


def stage_solve(work: Path, model: str, sigma: float, K: int, lam: float | None, M: int | None,
                seed: int | None, opts: SolverOptions, lp_out: Path | None = None) -> Path:
    net = load_work_network(work)
    sets_info = json.loads(_require(work / "sets" / "sets.json", "build-sets").read_text())
    tr = load_work_csv(work, f"sets/train_K{K}.csv", "build-sets")
    if seed is None:
        seed = int(os.environ.get(SEED_ENV, sets_info.get("seed", 0)))
    point = GridPoint(model, model, K, sigma,
                      lam=(1.0 if lam is None else lam) if model == "discrete" else None,
                      M=(M or 1) if model == "aarc" else None)
    P = None
    if model == "aarc":
        ppath = work / "sets" / f"polyhedron_K{K}_M{point.M}.csv"
        if ppath.exists() and seed == sets_info.get("seed"):
            P = unc.parse_polyhedron_csv(ppath.read_text(encoding="utf-8"))
        else:
            P = unc.sample_hyperplanes(tr, point.M, seed)
        lp, cat = build_aarc(net, P, sigma, tr.commodities)
    else:
        lp, cat, _ = build_model(net, tr, point, seed)
    if lp_out is not None:
        lp_out.write_text(write_lp_file(lp, cat), encoding="utf-8")
    sol = solve(lp, opts)
    if sol.status is not Status.OPTIMAL:
        raise RuntimeError(f"{point.tag}: solver ended with {sol.status.value}")
    x = extract_first_stage(sol, cat)
    if sigma > 0:
        tau = worst_case_outsourcing(sol, cat, P)
    else:
        lp1, cat1 = build_aarc(net, P, 1.0, tr.commodities) if P is not None else \
            build_model(net, tr, replace(point, sigma=1.0), seed)[:2]
        tau = recourse_worst_case(lp1, cat1, x, opts)
    sm = SolvedModel(point, sol.status.value, sol.objective, sol.iterations, x, investment_cost(net, x),
                     tau, (lp.num_rows, lp.num_cols))
    path = work / "solutions" / f"{point.tag}.json"
    write_json(path, solution_dict(net, sm, seed))
    write_x_csv(path.with_suffix(".x.csv"), net, x)
    return path


def stage_evaluate(work: Path, investment: Path, out: Path | None, opts: SolverOptions) -> Path:
    net = load_work_network(work)
    ev = load_work_csv(work, "sets/eval.csv", "build-sets")
    meta: dict = {}
    if investment.suffix == ".json":
        sol = json.loads(investment.read_text(encoding="utf-8"))
        x = np.array(sol["x"], dtype=float)
        meta = {k: sol.get(k) for k in ("tag", "experiment", "model", "sigma", "lambda", "M")}
    else:
        x = read_x_csv(investment, net)
        stem = investment.name[: -len(".x.csv")] if investment.name.endswith(".x.csv") else investment.stem
        side = investment.with_name(stem + ".json")
        if side.exists():
            sol = json.loads(side.read_text(encoding="utf-8"))
            meta = {k: sol.get(k) for k in ("tag", "experiment", "model", "sigma", "lambda", "M")}
        else:
            meta = {"tag": stem, "experiment": "custom", "model": "custom", "sigma": 0.0, "lambda": None, "M": None}
    rep = evaluate_investment(net, x, ev, opts)
    target = out or work / "reports" / f"{meta.get('tag') or investment.stem}.json"
    write_json(target, {**rep.to_dict(), **meta})
    return target


def stage_frontier(reports: list[Path]) -> str:
    pts = []
    for r in reports:
        d = json.loads(Path(r).read_text(encoding="utf-8"))
        if "metrics" not in d:
            raise StageDependencyError(f"{r} is not an evaluation report; run 'evaluate' first")
        pts.append(FrontierPoint(d.get("experiment") or d.get("model") or "custom", float(d.get("sigma") or 0.0),
                                 float(d["investment_cost"]), Metrics(**d["metrics"]),
                                 d.get("lambda"), d.get("M")))
    return frontier(pts)


def report_from_json(path: Path) -> EvaluationReport:
    return EvaluationReport.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
