from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rncep.sndlib_io import (
    Link,
    NetworkSpec,
    ScenarioSet,
    SndlibParseError,
    expand_undirected,
    load_scenario_dir,
    parse_demands,
    parse_network,
    parse_scenario_csv,
    read_scenarios,
    write_scenario_csv,
)

from helpers import scen

NET = """?SNDlib native format; type: network; version: 1.0
# network tiny

NODES (
  a ( 0.0 0.0 )
  b ( 1.0 0.0 )
  c ( 1.0 1.0 )
)

LINKS (
  L1 ( a b ) 3.00 5.00 0.00 0.00 ( )
  L2 ( b c ) 0.00 9.00 0.00 0.00 ( 10.00 40.00 40.00 120.00 )
)
"""


def demand_text(entries):
    lines = ["?SNDlib native format; type: demands; version: 1.0", "DEMANDS ("]
    for i, (s, t, v) in enumerate(entries):
        lines.append(f"  D{i} ( {s} {t} ) 1 {v} UNLIMITED")
    return "\n".join(lines + [")", ""])


def test_parse_network_basic():
    net = parse_network(NET)
    assert net.name == "tiny"
    assert net.nodes == ("a", "b", "c")
    assert net.num_arcs == 4
    assert [(a.id, a.tail, a.head) for a in net.arcs] == [
        ("L1+", "a", "b"), ("L1-", "b", "a"), ("L2+", "b", "c"), ("L2-", "c", "b")]
    # no modules: pre-installed cost; modules: cheapest cost per unit (120 / 40 = 3)
    assert net.costs.tolist() == [5.0, 5.0, 3.0, 3.0]
    assert net.capacities.tolist() == [3.0, 3.0, 0.0, 0.0]
    assert net.out_arcs["b"] == (1, 2) and net.in_arcs["b"] == (0, 3)


def test_two_node_single_link():
    text = "NODES (\n s ( 0 0 )\n t ( 1 1 )\n)\nLINKS (\n L ( s t ) 0 1 0 0 ( )\n)\n"
    net = parse_network(text)
    assert net.num_arcs == 2
    assert all(a.capacity == 0 and a.cost == 1 for a in net.arcs)


def test_empty_links_section():
    net = parse_network("NODES (\n a ( 0 0 )\n)\nLINKS (\n)\n")
    assert net.num_arcs == 0 and net.nodes == ("a",)


def test_expand_undirected():
    assert expand_undirected([]) == []
    arcs = expand_undirected([Link("e", "a", "b", 3.0, 5.0)])
    assert [(a.tail, a.head, a.capacity, a.cost) for a in arcs] == [("a", "b", 3.0, 5.0), ("b", "a", 3.0, 5.0)]


@given(st.integers(0, 60))
def test_expand_undirected_doubles(n):
    links = [Link(f"l{i}", f"u{i}", f"v{i}", 1.0, 1.0) for i in range(n)]
    assert len(expand_undirected(links)) == 2 * n


@pytest.mark.parametrize("text,needle,line", [
    ("NODES (\n a ( 0 0 )\n)\nLINKS [\n)\n", "malformed section header", 4),
    ("NODES (\n a ( 0 0 )\n)\nLINKS (\n L ( a z ) 1 1 0 0 ( )\n)\n", "unknown node z", 5),
    ("NODES (\n a ( 0 0 )\n b ( 0 0 )\n)\nLINKS (\n L ( a b ) -1 1 0 0 ( )\n)\n", "negative capacity", 6),
    ("NODES (\n a ( 0 0 )\n b ( 0 0 )\n)\nLINKS (\n L ( a b ) 1 -2 0 0 ( )\n)\n", "negative cost", 6),
    ("NODES (\n a ( 0 0 )\n b ( 0 0 )\n)\nLINKS (\n L ( a b ) x 1 0 0 ( )\n)\n", "invalid capacity", 6),
])
def test_parse_errors_carry_line_numbers(text, needle, line):
    with pytest.raises(SndlibParseError) as e:
        parse_network(text, source="bad.txt")
    assert needle in str(e.value)
    assert e.value.line == line
    assert "bad.txt" in str(e.value)


def test_unclosed_section():
    with pytest.raises(SndlibParseError, match="not closed"):
        parse_network("NODES (\n a ( 0 0 )\n")


def test_parse_demands_sums_duplicates():
    d = parse_demands(demand_text([("a", "b", 1.5), ("a", "b", 2.0), ("b", "a", 0.0)]))
    assert d == {("a", "b"): 3.5, ("b", "a"): 0.0}
    with pytest.raises(SndlibParseError, match="negative"):
        parse_demands(demand_text([("a", "b", -1)]))


def test_load_scenario_dir_single(tmp_path):
    (tmp_path / "d0.txt").write_text(demand_text([("a", "b", 5.0)]))
    R = load_scenario_dir(tmp_path)
    assert R.commodities == (("a", "b"),)
    assert R.demands.tolist() == [[5.0]]
    assert R.labels == ("d0",)


def test_load_scenario_dir_union_of_pairs(tmp_path):
    (tmp_path / "x1.txt").write_text(demand_text([("c", "d", 2.0)]))
    (tmp_path / "x0.txt").write_text(demand_text([("a", "b", 1.0)]))
    R = load_scenario_dir(tmp_path)
    assert R.commodities == (("a", "b"), ("c", "d"))
    assert R.demands.tolist() == [[1.0, 0.0], [0.0, 2.0]]


def test_load_scenario_dir_permutation_invariant(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    entries = [("c", "a", 1.0), ("a", "b", 2.0), ("b", "c", 3.0)]
    (a / "s.txt").write_text(demand_text(entries))
    (b / "s.txt").write_text(demand_text(entries[::-1]))
    assert load_scenario_dir(a) == load_scenario_dir(b)


def test_load_scenario_dir_checks_network(tmp_path):
    (tmp_path / "s.txt").write_text(demand_text([("a", "q", 1.0)]))
    with pytest.raises(SndlibParseError, match="not in network"):
        load_scenario_dir(tmp_path, parse_network(NET))


def test_desk_round_trip(desk):
    R = desk.train
    assert parse_scenario_csv(write_scenario_csv(R)) == R
    net = NetworkSpec.from_dict(desk.net.to_dict())
    assert net == desk.net


def test_csv_zero_cell():
    text = write_scenario_csv(scen([("a", "b")], [[0.0]]))
    assert text.splitlines() == ["label,a:b", "r0,0"]


def test_csv_rejects_negative_and_ragged():
    with pytest.raises(SndlibParseError, match="negative"):
        parse_scenario_csv("label,a:b\nr0,-1\n")
    with pytest.raises(SndlibParseError, match="expected 2 fields"):
        parse_scenario_csv("label,a:b\nr0,1,2\n")
    with pytest.raises(SndlibParseError, match="header"):
        parse_scenario_csv("a:b\n1\n")


def test_read_scenarios_dispatch(tmp_path, desk):
    p = tmp_path / "s.csv"
    p.write_text(write_scenario_csv(desk.scenarios))
    assert read_scenarios(p) == desk.scenarios


def test_scenario_set_validation():
    with pytest.raises(ValueError):
        ScenarioSet((("a", "b"),), np.array([[-1.0]]), ("x",))
    with pytest.raises(ValueError):
        ScenarioSet((("a", "b"), ("a", "b")), np.zeros((1, 2)), ("x",))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.floats(0, 1e6, allow_nan=False), min_size=3, max_size=3), min_size=1, max_size=6))
def test_csv_round_trip_exact(rows):
    R = scen([("a", "b"), ("a", "c"), ("b", "c")], rows)
    back = parse_scenario_csv(write_scenario_csv(R))
    assert np.array_equal(back.demands, R.demands)
