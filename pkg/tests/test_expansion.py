import itertools

import pytest

from chainc import errors as E
from chainc.costs import AdjacencyPreferenceCost, CostModel, EdgeCountCost, get_cost_model, parse_preference
from chainc.errors import CapExceededError, ChaincError
from chainc.expansion import (
    ALL_BINDINGS,
    BEST_BINDING,
    SPLITTER,
    ExpansionPolicy,
    count_expansions,
    expand,
    select_best,
)
from chainc.grammar import parse
from chainc.model import Component, ComponentModel, CompositionEntry, LinkRef, Sequence, Single
from chainc.normalize import normalize


def model_for(text):
    return normalize(parse(text))


def first(text):
    return expand(model_for(text), ExpansionPolicy("first"))[0]


def labelled_edges(graph):
    functions = {node.instance_id: node.function for node in graph.nodes}
    return {(functions[u], functions[v]) for u, v in graph.edges}


def functions(graph):
    return sorted(node.function for node in graph.nodes)


def test_sequence_is_a_path():
    graph = first("service { BNG , NAT }")
    assert graph.node_ids() == ["c0/k0/BNG", "c0/k1/NAT"]
    assert graph.edges == (("c0/k0/BNG", "c0/k1/NAT"),)
    assert graph.entries == ("c0/k0/BNG",)
    assert graph.exits == ("c0/k1/NAT",)
    assert graph.flex_groups == ()
    assert graph.warnings == ()


def test_split_with_pass_bypasses_to_successor():
    graph = first("service { split { BNG ; HTTP-Filter ; pass } , NAT }")
    assert functions(graph) == ["BNG", "HTTP-Filter", "NAT"]
    assert labelled_edges(graph) == {("BNG", "HTTP-Filter"), ("HTTP-Filter", "NAT"), ("BNG", "NAT")}
    assert len(graph.edges) == 3
    assert graph.node("c0/k0/BNG").role == SPLITTER
    assert "c0/k0/b1r1/c1/k0/HTTP-Filter" in graph.node_ids()


def test_all_bindings_is_a_full_mesh():
    graph = first("service { all-bindings { WOC , EdgeFW , MON , ADC , AppFW } }")
    assert len(graph.nodes) == 5
    assert len(graph.edges) == 20
    assert set(graph.entries) == set(graph.exits) == set(graph.node_ids())
    assert len(graph.flex_groups) == 1
    assert graph.flex_groups[0].kind == ALL_BINDINGS
    assert set(graph.flex_groups[0].members) == set(graph.node_ids())


@pytest.mark.parametrize("mode", ["first", "enumerate", "annotate"])
def test_all_bindings_mesh_in_every_mode(mode):
    graphs = expand(model_for("service { all-bindings { A , B , C } }"), ExpansionPolicy(mode))
    assert len(graphs) == 1
    assert len(graphs[0].edges) == 6


def test_best_binding_enumerate():
    graphs = expand(model_for("service{best-binding{BNG,NAT}}"), ExpansionPolicy("enumerate"))
    assert [labelled_edges(g) for g in graphs] == [{("BNG", "NAT")}, {("NAT", "BNG")}]
    assert [g.bindings for g in graphs] == [(("BNG", "NAT"),), (("NAT", "BNG"),)]


def test_best_binding_first_keeps_written_order():
    graph = first("service { best-binding { NAT , BNG } }")
    assert labelled_edges(graph) == {("NAT", "BNG")}
    assert graph.bindings == (("NAT", "BNG"),)


def test_best_binding_annotate():
    graph = expand(model_for("service { PGW , best-binding { BNG , NAT , FW } }"), ExpansionPolicy("annotate"))[0]
    assert len(graph.edges) == 3 + 6
    assert graph.flex_groups[0].kind == BEST_BINDING
    assert set(graph.exits) == {"c0/k1/BNG", "c0/k1/NAT", "c0/k1/FW"}
    assert graph.bindings == ()


def test_replicated_branch_without_pass():
    graph = first("service{split{CL; A.2}}")
    assert graph.node_ids() == ["c0/k0/CL", "c0/k0/b1r1/c1/k0/A", "c0/k0/b1r2/c1/k0/A"]
    assert graph.edges == (("c0/k0/CL", "c0/k0/b1r1/c1/k0/A"), ("c0/k0/CL", "c0/k0/b1r2/c1/k0/A"))
    assert graph.warnings == ()


def test_mobile_example():
    graph = first("service { PGW , FW , split { DPI ; Header-Enr ; LI , Video-Opt ; TCP-Opt } }")
    assert len(graph.nodes) == 7
    assert labelled_edges(graph) == {
        ("PGW", "FW"), ("FW", "DPI"), ("DPI", "Header-Enr"), ("DPI", "LI"), ("LI", "Video-Opt"), ("DPI", "TCP-Opt"),
    }
    exits = {graph.node(i).function for i in graph.exits}
    assert exits == {"Header-Enr", "Video-Opt", "TCP-Opt"}


def test_split_with_best_binding_stage():
    graph = first("service { split { CL , best-binding { FW , IDS } ; A ; pass } , Z }")
    assert labelled_edges(graph) == {("CL", "FW"), ("FW", "IDS"), ("IDS", "A"), ("IDS", "Z"), ("A", "Z")}
    assert graph.entries == ("c0/k0/CL",)


def test_dangling_pass_warning():
    graph = first("service { split { BNG ; HTTP-Filter ; pass } }")
    assert [w.code for w in graph.warnings] == [E.W_DANGLING_PASS]
    assert {graph.node(i).function for i in graph.exits} == {"HTTP-Filter", "BNG"}


def test_dangling_pass_behind_a_trailing_link():
    graph = first("service { A , link(t) }\ncomponent t { split { BNG ; F ; pass } }")
    assert [w.code for w in graph.warnings] == [E.W_DANGLING_PASS]


def test_linked_split_with_a_successor_is_fine():
    graph = first("service { link(t) , Z }\ncomponent t { split { BNG ; F ; pass } }")
    assert graph.warnings == ()


def test_duplicate_functions_get_numbered_ids():
    model = ComponentModel("c0", (Component("c0", (
        CompositionEntry("k0", Sequence((Single("A"), Single("A")))),
    )),))
    graph = expand(model, ExpansionPolicy())[0]
    assert graph.node_ids() == ["c0/k0/A", "c0/k0/A#2"]
    assert graph.edges == (("c0/k0/A", "c0/k0/A#2"),)


def test_links_expand_into_disjoint_copies():
    text = ("service { link(access) , split { CL ; link(access) ; pass } , NAT }\n"
            "component access { BNG , best-binding { FW , IDS } }")
    graph = first(text)
    bngs = [n.instance_id for n in graph.nodes if n.function == "BNG"]
    assert bngs == ["c0/k0/c1/k0/BNG", "c0/k1/b1r1/c1/k0/BNG"]
    assert count_expansions(model_for(text)) == 4
    assert graph.bindings == (("FW", "IDS"), ("FW", "IDS"))


def test_replicated_copies_share_binding_choice():
    model = model_for("service { split { CL ; best-binding { A , B }.3 } }")
    assert count_expansions(model) == 2
    graphs = expand(model, ExpansionPolicy("enumerate"))
    assert len(graphs) == 2
    for graph, order in zip(graphs, [("A", "B"), ("B", "A")]):
        assert labelled_edges(graph) == {("CL", order[0]), order}
        assert len(graph.edges) == 6


@pytest.mark.parametrize("text,count", [
    ("service{BNG, NAT}", 1),
    ("service{best-binding{BNG, NAT}}", 2),
    ("service{best-binding{A,B,C}, best-binding{D,E}}", 12),
    ("service{all-bindings{A,B,C,D}}", 1),
    ("service{split{CL, best-binding{A,B,C}; best-binding{D,E}; pass}}", 12),
])
def test_count_expansions(text, count):
    model = model_for(text)
    assert count_expansions(model) == count
    assert len(expand(model, ExpansionPolicy("enumerate"))) == count


def test_enumeration_order_is_lexicographic():
    graphs = expand(model_for("service{best-binding{C,A,B}, best-binding{E,D}}"), ExpansionPolicy("enumerate"))
    keys = [sum(g.bindings, ()) for g in graphs]
    assert keys == sorted(keys)
    assert keys[0] == ("A", "B", "C", "D", "E")
    assert len(set(g.edges for g in graphs)) == 12


def test_count_is_exact_beyond_machine_integers():
    names = ", ".join(f"F{i}" for i in range(25))
    assert count_expansions(model_for(f"service{{best-binding{{{names}}}}}")) == 15511210043330985984000000


def test_cap_exceeded_reports_count():
    model = model_for("service { best-binding { FW , IDS , NAT , LB } }")
    with pytest.raises(CapExceededError) as info:
        expand(model, ExpansionPolicy("enumerate", cap=10))
    assert info.value.count == 24
    assert info.value.code == E.E_CAP_EXCEEDED
    assert "24" in info.value.message
    with pytest.raises(CapExceededError):
        expand(model, ExpansionPolicy("select", cap=10, cost=EdgeCountCost()))
    assert len(expand(model, ExpansionPolicy("first", cap=1))) == 1


def test_invalid_policies():
    for kwargs in ({"mode": "best"}, {"mode": "select"}, {"mode": "first", "cost": EdgeCountCost()},
                   {"cap": 0}, {"cap": True}):
        with pytest.raises(ChaincError) as info:
            ExpansionPolicy(**kwargs)
        assert info.value.code == E.E_INVALID_POLICY


def test_expand_rejects_unresolved_links():
    with pytest.raises(ChaincError) as info:
        expand(model_for("service { PGW , link(bng-nat) }"), ExpansionPolicy())
    assert info.value.code == E.E_INVALID_MODEL
    assert info.value.diagnostics[0].code == E.E_UNRESOLVED_REF


def test_expand_is_deterministic():
    text = "service { split { CL , best-binding { X , Y } ; best-binding { A , B }.2 ; pass } , Z }"
    policy = ExpansionPolicy("enumerate")
    assert expand(model_for(text), policy) == expand(model_for(text), policy)


def test_direction_is_metadata_only():
    model = model_for("service { BNG , NAT }")
    forward = expand(model, ExpansionPolicy())[0]
    symmetric = expand(model, ExpansionPolicy(), direction="symmetric")[0]
    assert symmetric.direction == "symmetric"
    assert symmetric.edges == forward.edges


def test_networkx_view():
    graph = first("service { split { BNG ; HTTP-Filter ; pass } , NAT }").to_networkx()
    assert graph.number_of_nodes() == 3
    assert graph.nodes["c0/k0/BNG"]["role"] == SPLITTER


# ============================================================================
# Selection
# ============================================================================

def test_select_best_prefers_adjacency():
    candidates = expand(model_for("service{best-binding{BNG,NAT}}"), ExpansionPolicy("enumerate"))
    graph, cost = select_best(candidates, AdjacencyPreferenceCost([("BNG", "NAT")]))
    assert labelled_edges(graph) == {("BNG", "NAT")}
    assert cost == 0

    graph, cost = select_best(candidates, AdjacencyPreferenceCost([("NAT", "BNG")]))
    assert labelled_edges(graph) == {("NAT", "BNG")}
    assert cost == 0


def test_select_best_ties_go_to_first_candidate():
    candidates = expand(model_for("service{best-binding{A,B,C}}"), ExpansionPolicy("enumerate"))
    graph, cost = select_best(candidates, EdgeCountCost())
    assert graph is candidates[0]
    assert cost == 2


def test_select_best_single_candidate():
    candidates = expand(model_for("service{A}"), ExpansionPolicy("enumerate"))
    assert select_best(candidates, EdgeCountCost())[0] is candidates[0]


def test_select_best_empty():
    with pytest.raises(ChaincError) as info:
        select_best([], EdgeCountCost())
    assert info.value.code == E.E_EMPTY_CANDIDATES


def test_select_mode():
    model = model_for("service { PGW , best-binding { BNG , NAT , FW } }")
    cost = AdjacencyPreferenceCost([("NAT", "BNG"), ("FW", "NAT"), ("FW", "BNG")])
    graph = expand(model, ExpansionPolicy("select", cost=cost))[0]
    assert graph.bindings == (("FW", "NAT", "BNG"),)
    assert cost(graph) == 0


def test_adjacency_cost_counts_reversed_hops():
    graph = first("service { NAT , BNG , FW }")
    assert AdjacencyPreferenceCost([("BNG", "NAT"), ("FW", "BNG")]).evaluate(graph) == 2
    assert AdjacencyPreferenceCost([("NAT", "FW")]).evaluate(graph) == 0


def test_cost_model_lookup():
    assert get_cost_model("edge-count").name == "edge-count"
    assert get_cost_model("adjacency-pref", [("A", "B")]).preferences == (("A", "B"),)
    with pytest.raises(ChaincError):
        get_cost_model("latency")
    assert parse_preference("BNG:NAT") == ("BNG", "NAT")
    for bad in ("BNG", ":NAT", "BNG:", "A:B:C"):
        with pytest.raises(ValueError):
            parse_preference(bad)


class ScaledCost(CostModel):
    name = "scaled"

    def __init__(self, base, factor):
        self.base = base
        self.factor = factor

    def evaluate(self, graph):
        return self.base(graph) * self.factor


def test_argmin_is_scale_invariant():
    candidates = expand(model_for("service{best-binding{A,B,C}, best-binding{D,E}}"), ExpansionPolicy("enumerate"))
    cost = AdjacencyPreferenceCost([("C", "A"), ("E", "D")])
    chosen, _ = select_best(candidates, cost)
    for factor in (0.5, 3, 1000):
        assert select_best(candidates, ScaledCost(cost, factor))[0] is chosen


# ============================================================================
# Mesh completeness
# ============================================================================

def test_every_member_order_is_a_path_in_the_mesh():
    graph = first("service { all-bindings { WOC , EdgeFW , MON , ADC , AppFW } }")
    edges = set(graph.edges)
    members = graph.flex_groups[0].members
    orders = list(itertools.permutations(members))
    assert len(orders) == 120
    for order in orders:
        assert all((u, v) in edges for u, v in zip(order, order[1:]))


@pytest.mark.parametrize("n", range(1, 8))
def test_sequence_shape(n):
    text = "service { " + " , ".join(f"F{i}" for i in range(n)) + " }"
    graph = first(text)
    assert len(graph.nodes) == n
    assert len(graph.edges) == n - 1
    assert len(graph.entries) == len(graph.exits) == 1
