from __future__ import annotations

import re
from dataclasses import dataclass

import pytest

from rncep import uncertainty as unc
from rncep.desk import load_desk
from rncep.lp import solve
from rncep.model_build import build_aarc, extract_affine_policy, extract_first_stage
from rncep.pipeline import truncated_training
from rncep.sndlib_io import Arc, NetworkSpec, ScenarioSet

DESK_STRIDE = 4
DESK_K = 4
DESK_M = 2
DESK_SEED = 7


@pytest.fixture
def two_node():
    """Single arc s->t with no installed capacity and unit expansion cost."""
    return NetworkSpec(("s", "t"), (Arc("st", "s", "t", 0.0, 1.0),), name="two-node")


@pytest.fixture
def st():
    return (("s", "t"),)


@dataclass
class Desk:
    net: NetworkSpec
    scenarios: ScenarioSet
    train: ScenarioSet
    eval: ScenarioSet
    data: ScenarioSet          # top-K training data
    P: unc.Polyhedron


@pytest.fixture(scope="session")
def desk() -> Desk:
    net, scenarios = load_desk()
    train, held = unc.split_train_eval(scenarios, DESK_STRIDE)
    data, _ = truncated_training(train, DESK_K)
    P = unc.sample_hyperplanes(data, DESK_M, DESK_SEED)
    return Desk(net, scenarios, train, unc.restrict_to(held, data.commodities), data, P)


@pytest.fixture(scope="session")
def desk_aarc(desk):
    """Solved affine model on the desk polyhedron at sigma = 10."""
    lp, cat = build_aarc(desk.net, desk.P, 10.0)
    sol = solve(lp)
    assert sol.optimal
    return lp, cat, sol, extract_first_stage(sol, cat), extract_affine_policy(sol, cat)


# -- acceptance summary ------------------------------------------------------------

_CRITERION = re.compile(r"test_criterion_(\d+)")
_RESULTS: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = _CRITERION.match(item.name)
    if not m:
        return
    n = int(m.group(1))
    title = (item.function.__doc__ or item.name).strip().splitlines()[0]
    if rep.skipped:
        _RESULTS[n] = ("SKIP", title)
    elif rep.failed:
        _RESULTS[n] = ("FAIL", title)
    elif rep.when == "call":
        _RESULTS.setdefault(n, ("PASS", title))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        status, title = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
