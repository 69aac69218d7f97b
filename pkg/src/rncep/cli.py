"""Command-line entry point.

Stage subcommands share a work directory::

    rncep parse --network net.txt --scenarios demands/ --work W
    rncep build-sets --work W --stride 12 --commodities 4 --lambda 0.5 1 --hyperplanes 1 2
    rncep solve --work W --model aarc --sigma 10 --commodities 4 --hyperplanes 2
    rncep evaluate --work W --investment W/solutions/<tag>.json
    rncep frontier W/reports/*.json --out frontier.csv

``rncep run --config exp.yaml`` runs the whole grid in one go.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .lp.simplex import SolverOptions
from .pipeline import (
    MODELS,
    ConfigError,
    StageDependencyError,
    load_config,
    run_experiment,
    stage_build_sets,
    stage_evaluate,
    stage_frontier,
    stage_parse,
    stage_solve,
)
from .sndlib_io import SndlibParseError

EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_DEPENDENCY = 3


def _solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backend", choices=("simplex", "highs"), default="simplex")
    p.add_argument("--max-iters", type=int, default=None)


def _opts(ns) -> SolverOptions:
    return SolverOptions(backend=ns.backend, max_iters=ns.max_iters)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rncep", description="Robust network capacity expansion planning")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="read SNDlib network and demand files into a work directory")
    p.add_argument("--network", type=Path, required=True)
    p.add_argument("--scenarios", type=Path, required=True, help="demand directory or scenario CSV")
    p.add_argument("--work", type=Path, required=True)

    p = sub.add_parser("build-sets", help="split data and build uncertainty sets")
    p.add_argument("--work", type=Path, required=True)
    p.add_argument("--stride", type=int, default=12)
    p.add_argument("--commodities", type=int, nargs="+", required=True)
    p.add_argument("--eval-commodities", type=int, default=None)
    p.add_argument("--lambda", dest="lambdas", type=float, nargs="*", default=[])
    p.add_argument("--hyperplanes", type=int, nargs="*", default=[])
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", help="solve one model at one grid point")
    p.add_argument("--work", type=Path, required=True)
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--commodities", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--hyperplanes", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--write-lp", type=Path, default=None, help="also write the LP in CPLEX LP format")
    _solver_args(p)

    p = sub.add_parser("evaluate", help="out-of-sample evaluation of an investment")
    p.add_argument("--work", type=Path, required=True)
    p.add_argument("--investment", type=Path, required=True, help="solution JSON or x CSV")
    p.add_argument("--out", type=Path, default=None)
    _solver_args(p)

    p = sub.add_parser("frontier", help="merge evaluation reports into a frontier CSV")
    p.add_argument("reports", type=Path, nargs="+")
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("run", help="run a full experiment from a YAML config")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--output", type=Path, default=None)
    return ap


def _dispatch(ns) -> int:
    cmd = ns.command
    if cmd == "parse":
        info = stage_parse(ns.network, ns.scenarios, ns.work)
        print(json.dumps(info, sort_keys=True))
    elif cmd == "build-sets":
        info = stage_build_sets(ns.work, ns.stride, ns.commodities, ns.eval_commodities,
                                ns.lambdas, ns.hyperplanes, ns.seed)
        print(f"wrote {len(info['files'])} set files to {ns.work / 'sets'}")
    elif cmd == "solve":
        path = stage_solve(ns.work, ns.model, ns.sigma, ns.commodities, ns.lam, ns.hyperplanes,
                           ns.seed, _opts(ns), ns.write_lp)
        sol = json.loads(path.read_text(encoding="utf-8"))
        print(f"{sol['tag']}: objective {sol['objective']:.10g}, investment cost {sol['invest_cost']:.10g}")
        print(path)
    elif cmd == "evaluate":
        path = stage_evaluate(ns.work, ns.investment, ns.out, _opts(ns))
        rep = json.loads(path.read_text(encoding="utf-8"))
        m = rep["metrics"]
        print(f"mean {m['mean']:.6g}  max {m['max']:.6g}  cvar10 {m['cvar']:.6g}  std {m['std']:.6g}")
        print(path)
    elif cmd == "frontier":
        text = stage_frontier(ns.reports)
        if ns.out:
            ns.out.write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    elif cmd == "run":
        cfg = load_config(ns.config)
        if ns.jobs is not None:
            cfg.jobs = max(1, ns.jobs)
        if ns.output is not None:
            cfg.output = ns.output.resolve()
        status = run_experiment(cfg)
        print(f"results in {cfg.output}" + ("" if status == 0 else " (some points failed, see FAILED)"))
        return status
    return 0


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _dispatch(ns)
    except StageDependencyError as e:
        print(f"rncep: {e}", file=sys.stderr)
        return EXIT_DEPENDENCY
    except (ConfigError, SndlibParseError, FileNotFoundError) as e:
        print(f"rncep: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, RuntimeError) as e:
        print(f"rncep: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
