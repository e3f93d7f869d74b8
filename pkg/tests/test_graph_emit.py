import pydot
import pytest

from chainc import errors as E
from chainc.expansion import ExpansionPolicy, ForwardingGraph, NodeInstance, expand
from chainc.grammar import parse
from chainc.graph_emit import graph_stats, reachability_check, to_dot
from chainc.normalize import normalize
from conftest import GOLDEN


def first(text):
    return expand(normalize(parse(text)), ExpansionPolicy("first"))[0]


def parsed(text):
    graphs = pydot.graph_from_dot_data(text)
    assert graphs is not None and len(graphs) == 1
    return graphs[0]


def test_dot_for_a_sequence():
    assert to_dot(first("service { BNG , NAT }")) == (
        'digraph "forwarding-graph" {\n'
        '  // direction: forward\n'
        '  "c0/k0/BNG" [label="BNG", shape=box, peripheries=2];\n'
        '  "c0/k1/NAT" [label="NAT", shape=box, peripheries=2];\n'
        '  "c0/k0/BNG" -> "c0/k1/NAT";\n'
        '}\n'
    )


def test_dot_for_the_split_example():
    text = to_dot(first("service { split { BNG ; HTTP-Filter ; pass } , NAT }"))
    dot = parsed(text)
    assert len(dot.get_nodes()) == 3
    assert len(dot.get_edges()) == 3
    bng = [line for line in text.splitlines() if line.startswith('  "c0/k0/BNG" [')]
    assert bng and "shape=diamond" in bng[0]


def test_dot_mesh_cluster():
    text = to_dot(first(GOLDEN["datacenter.sfc"]))
    dot = parsed(text)
    clusters = dot.get_subgraphs()
    assert len(clusters) == 1
    assert clusters[0].get_name() == "cluster_0"
    assert len(clusters[0].get_nodes()) == 5
    assert len(clusters[0].get_edges()) == 20
    assert dot.get_edges() == []
    assert text.count(" -> ") == 20


def test_dot_is_sorted_and_deterministic():
    graph = first(GOLDEN["mobile.sfc"])
    text = to_dot(graph)
    assert text == to_dot(first(GOLDEN["mobile.sfc"]))
    node_lines = [line.split(" [")[0].strip() for line in text.splitlines() if "[label=" in line]
    assert node_lines == sorted(node_lines)
    edge_lines = [line.strip() for line in text.splitlines() if " -> " in line]
    assert edge_lines == sorted(edge_lines)


def test_single_node_is_entry_and_exit():
    text = to_dot(first("service { A }"))
    assert "peripheries=3" in text


def test_endpoints_and_direction():
    graph = expand(normalize(parse("service { SAP1 , FW , SAP2 }")), ExpansionPolicy(), direction="symmetric")[0]
    text = to_dot(graph, endpoints=["SAP1", "SAP2"])
    assert text.count("shape=ellipse") == 2
    assert "// direction: symmetric" in text
    parsed(text)


def test_quotes_are_escaped():
    graph = ForwardingGraph(nodes=(NodeInstance('a"b', "F"),), edges=(), entries=('a"b',), exits=('a"b',))
    assert '"a\\"b"' in to_dot(graph)


@pytest.mark.parametrize("text,expected", [
    ("service { BNG , NAT }", (2, 1, 1, 1, 0, False)),
    ("service { A }", (1, 0, 1, 1, 0, False)),
    (GOLDEN["datacenter.sfc"], (5, 20, 5, 5, 1, False)),
    (GOLDEN["mobile.sfc"], (7, 6, 1, 3, 0, False)),
    ("service { split { BNG ; HTTP-Filter ; pass } , NAT }", (3, 3, 1, 1, 0, False)),
])
def test_graph_stats(text, expected):
    assert graph_stats(first(text)).as_tuple() == expected


def test_stats_line():
    assert graph_stats(first("service { BNG , NAT }")).format() == "nodes=2 edges=1 entries=1 exits=1 flexgroups=0"


def hand_built():
    return ForwardingGraph(
        nodes=(NodeInstance("a", "A"), NodeInstance("b", "B"), NodeInstance("c", "C")),
        edges=(("a", "b"),),
        entries=("a",),
        exits=("b",),
    )


def test_dangling_exit_detection():
    assert graph_stats(hand_built()).has_dangling_exits is True


def test_reachability_flags_isolated_node():
    diagnostics = reachability_check(hand_built())
    assert [d.code for d in diagnostics] == [E.E_UNREACHABLE_NODE]
    assert diagnostics[0].path == "c"


@pytest.mark.parametrize("canonical", sorted(GOLDEN.values()))
def test_expansion_output_is_reachable(canonical):
    assert reachability_check(first(canonical)) == []
