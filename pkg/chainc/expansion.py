"""
Forwarding-graph expansion
Turns a ComponentModel into concrete forwarding graphs. Best-binding
freedom is resolved by an ExpansionPolicy; all-bindings always become a
full mesh; splits fan out over their (replicated) branches and pass
branches bypass to the successor composition.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence as Seq, Set, Tuple

import networkx as nx

from chainc import errors as E
from chainc.config import DEFAULT_CAP, DEFAULT_DIRECTION, EXPANSION_MODES
from chainc.costs import CostModel
from chainc.errors import CapExceededError, ChaincError, Diagnostic
from chainc.model import (
    AllBindings,
    BestBinding,
    ComponentModel,
    FlatComposition,
    FlatSplit,
    LinkRef,
    PassRef,
    Sequence,
    Single,
    sequence_functions,
)
from chainc.validate import validate_model

PLAIN = "plain"
SPLITTER = "splitter"

BEST_BINDING = "best_binding"
ALL_BINDINGS = "all_bindings"

Edge = Tuple[str, str]
Stage = Tuple[List[str], List[str]]


@dataclass(frozen=True)
class NodeInstance:
    instance_id: str
    function: str
    role: str = PLAIN


@dataclass(frozen=True)
class FlexGroup:
    kind: str
    members: Tuple[str, ...]


@dataclass(frozen=True)
class ForwardingGraph:
    """
    One concrete forwarding graph

    nodes keep creation order, edges are sorted and unique. bindings holds
    the chosen order of every best-binding group in pre-order (empty in
    annotate mode, where the groups stay open as FlexGroups).
    """

    nodes: Tuple[NodeInstance, ...]
    edges: Tuple[Edge, ...]
    entries: Tuple[str, ...]
    exits: Tuple[str, ...]
    flex_groups: Tuple[FlexGroup, ...] = ()
    warnings: Tuple[Diagnostic, ...] = ()
    bindings: Tuple[Tuple[str, ...], ...] = ()
    direction: str = DEFAULT_DIRECTION

    def node(self, instance_id: str) -> NodeInstance:
        for node in self.nodes:
            if node.instance_id == instance_id:
                return node
        raise KeyError(instance_id)

    def node_ids(self) -> List[str]:
        return [node.instance_id for node in self.nodes]

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        for node in self.nodes:
            graph.add_node(node.instance_id, function=node.function, role=node.role)
        graph.add_edges_from(self.edges)
        return graph


@dataclass(frozen=True)
class ExpansionPolicy:
    """
    How best-binding freedom is resolved

    Args:
        mode: first | enumerate | select | annotate
        cap: Largest candidate count enumerate/select may produce
        cost: Cost model, required iff mode is select
    """

    mode: str = "first"
    cap: int = DEFAULT_CAP
    cost: Optional[CostModel] = None

    def __post_init__(self):
        if self.mode not in EXPANSION_MODES:
            raise ChaincError(E.E_INVALID_POLICY,
                              f"unknown mode {self.mode!r}, expected one of {', '.join(EXPANSION_MODES)}")
        if not isinstance(self.cap, int) or isinstance(self.cap, bool) or self.cap < 1:
            raise ChaincError(E.E_INVALID_POLICY, f"cap must be a positive integer, got {self.cap!r}")
        if (self.mode == "select") != (self.cost is not None):
            raise ChaincError(E.E_INVALID_POLICY, "a cost model is required for select mode and only there")


def _unique(ids: Seq[str]) -> List[str]:
    return list(dict.fromkeys(ids))


class _GraphBuilder:
    """
    Builds one graph

    Args:
        model: Valid model with local references only
        mode: Expansion mode
        choices: One permutation per best-binding group (enumerate/select),
            None to keep the written order (first) or mesh (annotate)
    """

    def __init__(self, model: ComponentModel, mode: str, choices: Optional[Seq[Tuple[str, ...]]]):
        self.model = model
        self.components = model.component_map()
        self.mode = mode
        self.choices = choices
        self.group_index = 0
        self.nodes: List[NodeInstance] = []
        self.used: Set[str] = set()
        self.edges: Dict[Edge, None] = {}
        self.flex_groups: List[FlexGroup] = []
        self.bindings: Dict[int, Tuple[str, ...]] = {}

    def add_node(self, path: str, function: str, role: str = PLAIN) -> str:
        base = f"{path}/{function}"
        instance_id = base
        copy = 1
        while instance_id in self.used:
            copy += 1
            instance_id = f"{base}#{copy}"
        self.used.add(instance_id)
        self.nodes.append(NodeInstance(instance_id, function, role))
        return instance_id

    def connect(self, sources: Seq[str], targets: Seq[str]) -> None:
        for u in sources:
            for v in targets:
                if u != v:
                    self.edges[(u, v)] = None

    def chain(self, path: str, functions: Seq[str]) -> Stage:
        ids = [self.add_node(path, name) for name in functions]
        for u, v in zip(ids, ids[1:]):
            self.connect([u], [v])
        return ids[:1], ids[-1:]

    def mesh(self, path: str, functions: Seq[str], kind: str) -> Stage:
        ids = [self.add_node(path, name) for name in functions]
        for u, v in itertools.permutations(ids, 2):
            self.edges[(u, v)] = None
        self.flex_groups.append(FlexGroup(kind, tuple(ids)))
        return list(ids), list(ids)

    def best_binding(self, path: str, functions: Seq[str]) -> Stage:
        if self.mode == "annotate":
            return self.mesh(path, functions, BEST_BINDING)
        index = self.group_index
        self.group_index += 1
        order = tuple(functions) if self.choices is None else self.choices[index]
        self.bindings.setdefault(index, order)
        return self.chain(path, order)

    def component(self, component_id: str, path: str) -> Stage:
        entries: List[str] = []
        exits: Optional[List[str]] = None
        for entry in self.components[component_id].compositions:
            stage_entries, stage_exits = self.composition(entry.body, f"{path}/{entry.id}")
            if exits is None:
                entries = stage_entries
            else:
                self.connect(exits, stage_entries)
            exits = stage_exits
        return entries, exits or []

    def composition(self, body: FlatComposition, path: str) -> Stage:
        if isinstance(body, Single):
            node = self.add_node(path, body.function)
            return [node], [node]
        if isinstance(body, Sequence):
            return self.chain(path, sequence_functions(body))
        if isinstance(body, BestBinding):
            return self.best_binding(path, body.functions)
        if isinstance(body, AllBindings):
            return self.mesh(path, body.functions, ALL_BINDINGS)
        if isinstance(body, FlatSplit):
            return self.split(body, path)
        if isinstance(body, LinkRef):
            return self.component(body.target, f"{path}/{body.target}")
        raise ChaincError(E.E_INVALID_MODEL, f"unknown composition {type(body).__name__}")

    def split(self, body: FlatSplit, path: str) -> Stage:
        splitter = self.add_node(path, body.splitter, SPLITTER)
        fan_out = [splitter]
        if body.pre:
            pre_entries, fan_out = self.best_binding(path, body.pre)
            self.connect([splitter], pre_entries)

        exits: List[str] = []
        for branch in body.branches:
            if isinstance(branch, PassRef):
                exits.extend(fan_out)
                continue
            # copies are isomorphic: each one replays the same binding choices
            start = self.group_index
            for copy in range(1, branch.replications + 1):
                self.group_index = start
                copy_path = f"{path}/b{branch.branch_id}r{copy}/{branch.target}"
                branch_entries, branch_exits = self.component(branch.target, copy_path)
                self.connect(fan_out, branch_entries)
                exits.extend(branch_exits)
        return [splitter], _unique(exits)

    def build(self, direction: str) -> ForwardingGraph:
        start = self.model.starting_component
        entries, exits = self.component(start, start)
        return ForwardingGraph(
            nodes=tuple(self.nodes),
            edges=tuple(sorted(self.edges)),
            entries=tuple(_unique(entries)),
            exits=tuple(_unique(exits)),
            flex_groups=tuple(self.flex_groups),
            warnings=tuple(_dangling_pass(self.model)),
            bindings=tuple(self.bindings[i] for i in sorted(self.bindings)),
            direction=direction,
        )


def _dangling_pass(model: ComponentModel) -> List[Diagnostic]:
    component = model.get(model.starting_component)
    last = component.compositions[-1]
    # a trailing link ends the service with the linked component's last composition
    while isinstance(last.body, LinkRef):
        component = model.get(last.body.target)
        last = component.compositions[-1]
    if isinstance(last.body, FlatSplit) and any(isinstance(b, PassRef) for b in last.body.branches):
        return [E.warning(E.W_DANGLING_PASS,
                          "pass branch of the final split has no successor to bypass to",
                          f"service-component[{component.id}]/compositions[{last.id}]")]
    return []


def _binding_groups(model: ComponentModel) -> List[Tuple[str, ...]]:
    """Best-binding groups in the order the builder consumes them"""
    components = model.component_map()
    groups: List[Tuple[str, ...]] = []

    def walk(component_id: str) -> None:
        for entry in components[component_id].compositions:
            body = entry.body
            if isinstance(body, BestBinding):
                groups.append(body.functions)
            elif isinstance(body, FlatSplit):
                if body.pre:
                    groups.append(body.pre)
                for branch in body.branches:
                    if not isinstance(branch, PassRef):
                        walk(branch.target)
            elif isinstance(body, LinkRef):
                walk(body.target)

    walk(model.starting_component)
    return groups


def _require_valid(model: ComponentModel) -> None:
    problems = E.errors_only(validate_model(model))
    if problems:
        raise ChaincError(E.E_INVALID_MODEL, f"model has {len(problems)} error(s)", problems)


def count_expansions(model: ComponentModel) -> int:
    """
    Number of graphs enumerate mode produces with an unbounded cap

    Args:
        model: Valid model with local references only

    Returns:
        Product of |g|! over every best-binding group g (arbitrary precision)
    """
    _require_valid(model)
    return math.prod(math.factorial(len(group)) for group in _binding_groups(model))


def _choices(groups: List[Tuple[str, ...]]) -> Iterator[Tuple[Tuple[str, ...], ...]]:
    return itertools.product(*(itertools.permutations(sorted(group)) for group in groups))


def select_best(candidates: Seq[ForwardingGraph], cost: CostModel) -> Tuple[ForwardingGraph, float]:
    """
    Pick the cheapest candidate

    Args:
        candidates: Graphs in enumeration order
        cost: Cost model

    Returns:
        (graph, cost value); ties go to the earliest candidate

    Raises:
        ChaincError: E_EMPTY_CANDIDATES
    """
    if not candidates:
        raise ChaincError(E.E_EMPTY_CANDIDATES, "no candidate graphs to select from")
    best, best_cost = candidates[0], cost(candidates[0])
    for candidate in candidates[1:]:
        value = cost(candidate)
        if value < best_cost:
            best, best_cost = candidate, value
    return best, best_cost


def expand(model: ComponentModel, policy: ExpansionPolicy,
           direction: str = DEFAULT_DIRECTION) -> List[ForwardingGraph]:
    """
    Expand a component model into forwarding graphs

    Args:
        model: Valid model with local references only (resolve catalog links first)
        policy: Expansion policy
        direction: Direction metadata copied onto every graph

    Returns:
        All candidates in enumeration order (enumerate) or exactly one graph

    Raises:
        ChaincError: E_INVALID_MODEL
        CapExceededError: enumerate/select would produce more than policy.cap graphs
    """
    _require_valid(model)
    if policy.mode in ("first", "annotate"):
        return [_GraphBuilder(model, policy.mode, None).build(direction)]

    groups = _binding_groups(model)
    count = math.prod(math.factorial(len(group)) for group in groups)
    if count > policy.cap:
        raise CapExceededError(count, policy.cap)

    candidates = [
        _GraphBuilder(model, policy.mode, choice).build(direction)
        for choice in _choices(groups)
    ]
    if policy.mode == "enumerate":
        return candidates
    best, _ = select_best(candidates, policy.cost)
    return [best]
