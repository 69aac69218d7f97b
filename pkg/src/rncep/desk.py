"""The bundled desk instance: a 5-node, 14-arc network with 48 half-hourly demand files."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .sndlib_io import NetworkSpec, ScenarioSet, load_scenario_dir, read_network


def desk_dir() -> Path:
    return Path(str(resources.files("rncep") / "data" / "desk"))


def load_desk() -> tuple[NetworkSpec, ScenarioSet]:
    root = desk_dir()
    net = read_network(root / "network.txt")
    return net, load_scenario_dir(root / "scenarios", net)
