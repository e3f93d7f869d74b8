"""
Forwarding-graph output
DOT rendering, summary statistics and the reachability check
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Set

import networkx as nx

from chainc import errors as E
from chainc.config import (
    DOT_ENDPOINT_SHAPE,
    DOT_GRAPH_NAME,
    DOT_NODE_SHAPE,
    DOT_SPLITTER_SHAPE,
    STATS_LINE_FORMAT,
)
from chainc.errors import Diagnostic
from chainc.expansion import SPLITTER, ForwardingGraph


@dataclass(frozen=True)
class GraphStats:
    node_count: int
    edge_count: int
    entry_count: int
    exit_count: int
    flex_group_count: int
    has_dangling_exits: bool

    def as_tuple(self):
        return (self.node_count, self.edge_count, self.entry_count, self.exit_count,
                self.flex_group_count, self.has_dangling_exits)

    def format(self) -> str:
        """The fixed statistics line printed by `chainc expand`"""
        return STATS_LINE_FORMAT.format(
            nodes=self.node_count,
            edges=self.edge_count,
            entries=self.entry_count,
            exits=self.exit_count,
            flexgroups=self.flex_group_count,
        )


def _quote(text: str) -> str:
    return '"{}"'.format(text.replace("\\", "\\\\").replace('"', r'\"'))


def to_dot(graph: ForwardingGraph, endpoints: Iterable[str] = ()) -> str:
    """
    Render a graph as a Graphviz digraph

    Args:
        graph: Forwarding graph
        endpoints: Function names tagged as endpoints (drawn as ellipses)

    Returns:
        DOT text; nodes and edges sorted by instance id, one cluster per flex group
    """
    endpoints = set(endpoints)
    entries, exits = set(graph.entries), set(graph.exits)
    lines = [f"digraph {_quote(DOT_GRAPH_NAME)} {{", f"  // direction: {graph.direction}"]

    for node in sorted(graph.nodes, key=lambda n: n.instance_id):
        if node.role == SPLITTER:
            shape = DOT_SPLITTER_SHAPE
        elif node.function in endpoints:
            shape = DOT_ENDPOINT_SHAPE
        else:
            shape = DOT_NODE_SHAPE
        peripheries = 1 + (node.instance_id in entries) + (node.instance_id in exits)
        lines.append(f"  {_quote(node.instance_id)} [label={_quote(node.function)}, "
                     f"shape={shape}, peripheries={peripheries}];")

    clustered: Dict[tuple, None] = {}
    for index, group in enumerate(graph.flex_groups):
        members: Set[str] = set(group.members)
        lines.append(f"  subgraph cluster_{index} {{")
        lines.append(f"    label={_quote(group.kind)};")
        lines.append("    style=dashed;")
        for member in sorted(members):
            lines.append(f"    {_quote(member)};")
        for u, v in graph.edges:
            if u in members and v in members:
                clustered[(u, v)] = None
                lines.append(f"    {_quote(u)} -> {_quote(v)};")
        lines.append("  }")

    for u, v in sorted(graph.edges):
        if (u, v) not in clustered:
            lines.append(f"  {_quote(u)} -> {_quote(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_stats(graph: ForwardingGraph) -> GraphStats:
    """
    Exact counts for a graph

    has_dangling_exits is true when a node has no successor but is not one of
    the service's exits.
    """
    digraph = graph.to_networkx()
    exits = set(graph.exits)
    dangling = any(digraph.out_degree(node) == 0 and node not in exits for node in digraph.nodes)
    return GraphStats(
        node_count=len(graph.nodes),
        edge_count=len(graph.edges),
        entry_count=len(graph.entries),
        exit_count=len(graph.exits),
        flex_group_count=len(graph.flex_groups),
        has_dangling_exits=dangling,
    )


def reachability_check(graph: ForwardingGraph) -> List[Diagnostic]:
    """
    Report every node that no entry reaches

    Returns:
        One E_UNREACHABLE_NODE per unreachable node, in node order
    """
    digraph = graph.to_networkx()
    reached: Set[str] = set()
    for entry in graph.entries:
        if entry in digraph:
            reached.add(entry)
            reached |= nx.descendants(digraph, entry)
    return [
        E.error(E.E_UNREACHABLE_NODE, f"{node.function} is not reachable from any entry", node.instance_id)
        for node in graph.nodes
        if node.instance_id not in reached
    ]
