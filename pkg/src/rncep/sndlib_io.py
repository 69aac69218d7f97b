"""SNDlib native-format parsing and the scenario-matrix CSV format.

Native-format grammar accepted here (line oriented, ``#`` starts a comment,
lines beginning with ``?`` are format banners)::

    SECTION (                  # SECTION is NODES, LINKS, DEMANDS, META, ...
      <entry line>*
    )

    NODES entry:    <id> [( <x> <y> )]
    LINKS entry:    <id> ( <src> <dst> ) <pre_cap> <pre_cap_cost> <routing_cost>
                    <setup_cost> ( {<module_cap> <module_cost>}* )
    DEMANDS entry:  <id> ( <src> <dst> ) <routing_unit> <value> <max_path_length>

Sections other than NODES/LINKS/DEMANDS are skipped.  Each link becomes two
directed arcs, both with base capacity ``pre_cap``; the per-unit expansion
cost is the cheapest module price per unit of capacity, or ``pre_cap_cost``
when the link lists no modules.

Scenario CSV grammar::

    label,<s1>:<t1>,<s2>:<t2>,...
    <label>,<d11>,<d12>,...
    ...

UTF-8, comma separated, one row per scenario, values printed with 17
significant digits.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np


class SndlibParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


@dataclass(frozen=True)
class Link:
    id: str
    source: str
    target: str
    capacity: float
    cost: float


@dataclass(frozen=True)
class Arc:
    id: str
    tail: str
    head: str
    capacity: float
    cost: float


@dataclass(frozen=True)
class NetworkSpec:
    nodes: tuple[str, ...]
    arcs: tuple[Arc, ...]
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "arcs", tuple(self.arcs))
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node id")
        known = set(self.nodes)
        ids = set()
        for a in self.arcs:
            if a.tail not in known or a.head not in known:
                raise ValueError(f"arc {a.id} references an unknown node")
            if a.capacity < 0 or a.cost < 0:
                raise ValueError(f"arc {a.id} has negative capacity or cost")
            if a.id in ids:
                raise ValueError(f"duplicate arc id {a.id}")
            ids.add(a.id)

    @property
    def num_arcs(self) -> int:
        return len(self.arcs)

    @cached_property
    def node_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.nodes)}

    @cached_property
    def out_arcs(self) -> dict[str, tuple[int, ...]]:
        """Outgoing arc indices per node (delta-plus)."""
        out: dict[str, list[int]] = {v: [] for v in self.nodes}
        for j, a in enumerate(self.arcs):
            out[a.tail].append(j)
        return {v: tuple(js) for v, js in out.items()}

    @cached_property
    def in_arcs(self) -> dict[str, tuple[int, ...]]:
        """Incoming arc indices per node (delta-minus)."""
        inc: dict[str, list[int]] = {v: [] for v in self.nodes}
        for j, a in enumerate(self.arcs):
            inc[a.head].append(j)
        return {v: tuple(js) for v, js in inc.items()}

    @property
    def capacities(self) -> np.ndarray:
        return np.array([a.capacity for a in self.arcs], dtype=float)

    @property
    def costs(self) -> np.ndarray:
        return np.array([a.cost for a in self.arcs], dtype=float)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "nodes": list(self.nodes),
            "arcs": [[a.id, a.tail, a.head, a.capacity, a.cost] for a in self.arcs],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NetworkSpec":
        return cls(
            nodes=tuple(d["nodes"]),
            arcs=tuple(Arc(i, t, h, float(u), float(c)) for i, t, h, u, c in d["arcs"]),
            name=d.get("name", ""),
        )


@dataclass(frozen=True, eq=False)
class ScenarioSet:
    commodities: tuple[tuple[str, str], ...]
    demands: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        comms = tuple((str(s), str(t)) for s, t in self.commodities)
        dem = np.array(self.demands, dtype=float)
        if dem.ndim != 2:
            dem = dem.reshape(-1, len(comms)) if comms else dem.reshape(-1, 0)
        if dem.shape[1] != len(comms):
            raise ValueError(f"{dem.shape[1]} demand columns but {len(comms)} commodities")
        labels = tuple(self.labels) if self.labels else tuple(str(i) for i in range(dem.shape[0]))
        if len(labels) != dem.shape[0]:
            raise ValueError(f"{dem.shape[0]} scenario rows but {len(labels)} labels")
        if np.any(~np.isfinite(dem)) or np.any(dem < 0):
            raise ValueError("demands must be finite and nonnegative")
        for s, t in comms:
            if s == t:
                raise ValueError(f"commodity ({s},{t}) has equal source and sink")
        if len(set(comms)) != len(comms):
            raise ValueError("duplicate commodity")
        dem.flags.writeable = False
        object.__setattr__(self, "commodities", comms)
        object.__setattr__(self, "demands", dem)
        object.__setattr__(self, "labels", labels)

    @property
    def num_scenarios(self) -> int:
        return self.demands.shape[0]

    @property
    def num_commodities(self) -> int:
        return len(self.commodities)

    def rows(self, idx) -> "ScenarioSet":
        idx = list(idx)
        return ScenarioSet(self.commodities, self.demands[idx], tuple(self.labels[i] for i in idx))

    def columns(self, idx) -> "ScenarioSet":
        idx = list(idx)
        return ScenarioSet(tuple(self.commodities[k] for k in idx), self.demands[:, idx], self.labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScenarioSet):
            return NotImplemented
        return (
            self.commodities == other.commodities
            and self.labels == other.labels
            and self.demands.shape == other.demands.shape
            and bool(np.array_equal(self.demands, other.demands))
        )


# -- native format ---------------------------------------------------------------

_HEADER = re.compile(r"^([A-Z_]+)\s*\($")
_PAIR = re.compile(r"^(\S+)\s*\(\s*(\S+)\s+(\S+)\s*\)\s*(.*)$")


def _sections(text: str, source: str | None = None) -> dict[str, list[tuple[int, str]]]:
    sections: dict[str, list[tuple[int, str]]] = {}
    current: str | None = None
    depth = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("?"):
            continue
        if current is None:
            m = _HEADER.match(line)
            if not m:
                raise SndlibParseError(f"malformed section header {line!r}", lineno, source)
            current = m.group(1)
            if current in sections:
                raise SndlibParseError(f"duplicate section {current}", lineno, source)
            sections[current] = []
            depth = 1
            continue
        if line == ")" and depth == 1:
            current = None
            depth = 0
            continue
        depth += line.count("(") - line.count(")")
        if depth < 1:
            raise SndlibParseError("unbalanced parentheses", lineno, source)
        sections[current].append((lineno, line))
    if current is not None:
        raise SndlibParseError(f"section {current} is not closed", None, source)
    return sections


def _float(tok: str, lineno: int, what: str, source: str | None) -> float:
    try:
        return float(tok)
    except ValueError:
        raise SndlibParseError(f"invalid {what} {tok!r}", lineno, source) from None


def _parse_nodes(entries, source) -> list[str]:
    nodes = []
    for lineno, line in entries:
        name = line.split()[0].split("(")[0]
        if not name:
            raise SndlibParseError("node entry without id", lineno, source)
        if name in nodes:
            raise SndlibParseError(f"duplicate node {name}", lineno, source)
        nodes.append(name)
    return nodes


def _parse_links(entries, nodes: set[str], source) -> list[Link]:
    links = []
    for lineno, line in entries:
        m = _PAIR.match(line)
        if not m:
            raise SndlibParseError(f"malformed link entry {line!r}", lineno, source)
        lid, src, dst, rest = m.groups()
        for v in (src, dst):
            if v not in nodes:
                raise SndlibParseError(f"link {lid} references unknown node {v}", lineno, source)
        head, _, modules = rest.partition("(")
        nums = head.split()
        if len(nums) < 2:
            raise SndlibParseError(f"link {lid} lacks capacity/cost fields", lineno, source)
        cap = _float(nums[0], lineno, "capacity", source)
        pre_cost = _float(nums[1], lineno, "cost", source)
        mods = modules.replace(")", " ").split()
        if len(mods) % 2:
            raise SndlibParseError(f"link {lid} has an odd module list", lineno, source)
        mod_vals = [_float(t, lineno, "module value", source) for t in mods]
        ratios = [c / u for u, c in zip(mod_vals[::2], mod_vals[1::2]) if u > 0]
        cost = min(ratios) if ratios else pre_cost
        if cap < 0:
            raise SndlibParseError(f"link {lid} has negative capacity", lineno, source)
        if cost < 0 or pre_cost < 0 or any(v < 0 for v in mod_vals):
            raise SndlibParseError(f"link {lid} has negative cost", lineno, source)
        links.append(Link(lid, src, dst, cap, cost))
    return links


def expand_undirected(links: list[Link]) -> list[Arc]:
    """Two directed arcs per link, each carrying the link's capacity and cost."""
    arcs = []
    for ln in links:
        arcs.append(Arc(f"{ln.id}+", ln.source, ln.target, ln.capacity, ln.cost))
        arcs.append(Arc(f"{ln.id}-", ln.target, ln.source, ln.capacity, ln.cost))
    return arcs


def parse_network(text: str, source: str | None = None) -> NetworkSpec:
    """Parse SNDlib native network text into a directed NetworkSpec."""
    secs = _sections(text, source)
    if "NODES" not in secs or "LINKS" not in secs:
        raise SndlibParseError("network file needs NODES and LINKS sections", None, source)
    nodes = _parse_nodes(secs["NODES"], source)
    links = _parse_links(secs["LINKS"], set(nodes), source)
    name = ""
    m = re.search(r"^#\s*network\s+(\S+)", text, re.MULTILINE)
    if m:
        name = m.group(1)
    return NetworkSpec(tuple(nodes), tuple(expand_undirected(links)), name)


def read_network(path: str | Path) -> NetworkSpec:
    path = Path(path)
    return parse_network(path.read_text(encoding="utf-8"), source=str(path))


def parse_demands(text: str, source: str | None = None) -> dict[tuple[str, str], float]:
    """Demand values per (source, sink); repeated pairs are summed."""
    secs = _sections(text, source)
    if "DEMANDS" not in secs:
        raise SndlibParseError("no DEMANDS section", None, source)
    out: dict[tuple[str, str], float] = {}
    for lineno, line in secs["DEMANDS"]:
        m = _PAIR.match(line)
        if not m:
            raise SndlibParseError(f"malformed demand entry {line!r}", lineno, source)
        did, src, dst, rest = m.groups()
        fields = rest.split()
        if len(fields) < 2:
            raise SndlibParseError(f"demand {did} lacks a value", lineno, source)
        val = _float(fields[1], lineno, "demand value", source)
        if val < 0:
            raise SndlibParseError(f"demand {did} is negative", lineno, source)
        if src == dst:
            raise SndlibParseError(f"demand {did} has equal source and sink", lineno, source)
        out[(src, dst)] = out.get((src, dst), 0.0) + val
    return out


def load_scenario_dir(path: str | Path, network: NetworkSpec | None = None) -> ScenarioSet:
    """One scenario per demand file in ``path`` (lexicographic filename order).

    The commodity list is the union of (source, sink) pairs over all files,
    sorted lexicographically; a pair absent from a file has demand 0 there.
    """
    path = Path(path)
    files = sorted(p for p in path.iterdir() if p.is_file() and not p.name.startswith("."))
    if not files:
        raise SndlibParseError("scenario directory is empty", None, str(path))
    per_file = [parse_demands(f.read_text(encoding="utf-8"), source=str(f)) for f in files]
    pairs = sorted(set().union(*per_file))
    if network is not None:
        known = set(network.nodes)
        for s, t in pairs:
            for v in (s, t):
                if v not in known:
                    raise SndlibParseError(f"demand node {v} is not in network {network.name}", None, str(path))
    col = {p: k for k, p in enumerate(pairs)}
    dem = np.zeros((len(files), len(pairs)))
    for i, d in enumerate(per_file):
        for p, v in d.items():
            dem[i, col[p]] = v
    return ScenarioSet(tuple(pairs), dem, tuple(f.stem for f in files))


# -- scenario CSV ----------------------------------------------------------------

def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_scenario_csv(scen: ScenarioSet) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label"] + [f"{s}:{t}" for s, t in scen.commodities])
    for lbl, row in zip(scen.labels, scen.demands):
        w.writerow([lbl] + [_fmt(v) for v in row])
    return buf.getvalue()


def parse_scenario_csv(text: str, source: str | None = None) -> ScenarioSet:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise SndlibParseError("empty scenario CSV", None, source)
    header = rows[0]
    if not header or header[0] != "label":
        raise SndlibParseError("scenario CSV header must start with 'label'", 1, source)
    comms = []
    for tok in header[1:]:
        s, sep, t = tok.partition(":")
        if not sep or not s or not t:
            raise SndlibParseError(f"bad commodity header {tok!r}", 1, source)
        comms.append((s, t))
    labels, data = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise SndlibParseError(f"expected {len(header)} fields, got {len(row)}", lineno, source)
        vals = [_float(v, lineno, "demand value", source) for v in row[1:]]
        if any(v < 0 for v in vals):
            raise SndlibParseError("negative demand value", lineno, source)
        labels.append(row[0])
        data.append(vals)
    dem = np.array(data, dtype=float).reshape(len(data), len(comms))
    return ScenarioSet(tuple(comms), dem, tuple(labels))


def read_scenarios(path: str | Path, network: NetworkSpec | None = None) -> ScenarioSet:
    """Load a scenario directory or scenario CSV file."""
    path = Path(path)
    if path.is_dir():
        return load_scenario_dir(path, network)
    return parse_scenario_csv(path.read_text(encoding="utf-8"), source=str(path))
