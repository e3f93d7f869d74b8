"""
Conversions between the recursive AST and the flat component model
normalize() hoists nested structure into referenced components (the YANG
tree cannot nest compositions); inline() reverses it
"""

from collections import Counter
from typing import Dict, List, Optional, Tuple

import networkx as nx

from chainc import errors as E
from chainc.config import COMPOSITION_PREFIX, ROOT_COMPONENT_PREFIX
from chainc.errors import ChaincError
from chainc.model import (
    AllBindings,
    BestBinding,
    BranchRef,
    Component,
    ComponentModel,
    Composition,
    CompositionEntry,
    Definition,
    FlatBranch,
    FlatComposition,
    FlatSplit,
    LinkRef,
    NormalBranch,
    PassBranch,
    PassRef,
    Sequence,
    ServiceSpec,
    Single,
    Split,
    iter_references,
)
from chainc.validate import check_references, validate_spec


class _Normalizer:
    """Allocates c<N> ids in pre-order and builds flat components"""

    def __init__(self, spec: ServiceSpec):
        self.spec = spec
        self.slots: List[Optional[Component]] = []
        self.hoisted: Dict[str, str] = {}

    def component(self, items: Tuple[Composition, ...]) -> str:
        index = len(self.slots)
        component_id = f"{ROOT_COMPONENT_PREFIX}{index}"
        self.slots.append(None)
        entries = tuple(
            CompositionEntry(f"{COMPOSITION_PREFIX}{i}", self.flat(item))
            for i, item in enumerate(items)
        )
        self.slots[index] = Component(component_id, entries)
        return component_id

    def definition(self, name: str) -> str:
        if name not in self.hoisted:
            self.hoisted[name] = self.component(self.spec.definition(name).compositions)
        return self.hoisted[name]

    def is_local(self, target: str) -> bool:
        return self.spec.definition(target) is not None

    def flat(self, item: Composition) -> FlatComposition:
        if isinstance(item, (Single, BestBinding, AllBindings)):
            return item
        if isinstance(item, LinkRef):
            if self.is_local(item.target):
                return LinkRef(self.definition(item.target))
            return item
        if isinstance(item, Sequence):
            if all(isinstance(sub, Single) for sub in item.items):
                if len(item.items) == 1:
                    return item.items[0]
                return item
            return LinkRef(self.component(item.items))
        if isinstance(item, Split):
            branches: List[FlatBranch] = []
            for i, branch in enumerate(item.branches, 1):
                if isinstance(branch, PassBranch):
                    branches.append(PassRef(i))
                else:
                    branches.append(BranchRef(i, self.branch_target(branch.body), branch.replications))
            return FlatSplit(item.splitter, tuple(branches), tuple(item.pre))
        raise ChaincError(E.E_INVALID_SPEC, f"unknown composition {type(item).__name__}")

    def branch_target(self, body: Tuple[Composition, ...]) -> str:
        # a branch that is exactly one local link points straight at the linked component
        if len(body) == 1 and isinstance(body[0], LinkRef) and self.is_local(body[0].target):
            return self.definition(body[0].target)
        return self.component(body)

    def run(self) -> ComponentModel:
        start = self.component(self.spec.compositions)
        return ComponentModel(start, tuple(self.slots))


def normalize(spec: ServiceSpec) -> ComponentModel:
    """
    Flatten a spec into a component model

    The root component is c0; hoisted branch bodies, sequences and linked
    definitions get c1, c2, ... in pre-order; compositions are k0, k1, ... per
    component and split branches are numbered 1, 2, ...

    Args:
        spec: Service spec without validation errors

    Returns:
        Deterministic, acyclic ComponentModel starting at c0

    Raises:
        ChaincError: E_INVALID_SPEC when validate_spec() reports errors
    """
    problems = E.errors_only(validate_spec(spec))
    if problems:
        raise ChaincError(E.E_INVALID_SPEC, f"spec has {len(problems)} error(s)", problems)
    return _Normalizer(spec).run()


def inline(model: ComponentModel) -> ServiceSpec:
    """
    Rebuild a service spec from a component model

    Components reached through link-to-composition, or referenced from more
    than one place, become named definitions joined by link(...); every other
    branch component is written inline. Components unreachable from the
    starting component are dropped. External (catalog) links are kept as-is.

    Args:
        model: Component model with resolvable, acyclic references

    Returns:
        ServiceSpec whose normalize() is isomorphic to the model

    Raises:
        ChaincError: E_BAD_START, E_UNRESOLVED_REF or E_CYCLIC_REF
    """
    problems = E.errors_only(check_references(model, allow_external=True))
    if problems:
        raise ChaincError(problems[0].code, problems[0].message, problems)

    components = model.component_map()
    graph = nx.DiGraph()
    graph.add_nodes_from(components)
    for source, _, target, _ in iter_references(model):
        if target in components:
            graph.add_edge(source, target)
    reachable = nx.descendants(graph, model.starting_component) | {model.starting_component}

    indegree: Counter = Counter()
    linked = set()
    for source, _, target, kind in iter_references(model):
        if source in reachable and target in components:
            indegree[target] += 1
            if kind == "link":
                linked.add(target)

    definitions: Dict[str, Optional[Tuple[Composition, ...]]] = {}

    def compositions(component_id: str) -> Tuple[Composition, ...]:
        return tuple(to_ast(entry.body) for entry in components[component_id].compositions)

    def define(component_id: str) -> None:
        if component_id in definitions:
            return
        definitions[component_id] = None
        definitions[component_id] = compositions(component_id)

    def to_ast(body: FlatComposition) -> Composition:
        if isinstance(body, LinkRef):
            if body.target in components:
                define(body.target)
            return body
        if isinstance(body, FlatSplit):
            branches = []
            for branch in body.branches:
                if isinstance(branch, PassRef):
                    branches.append(PassBranch())
                elif branch.target in linked or indegree[branch.target] > 1:
                    define(branch.target)
                    branches.append(NormalBranch((LinkRef(branch.target),), branch.replications))
                else:
                    branches.append(NormalBranch(compositions(branch.target), branch.replications))
            return Split(body.splitter, tuple(branches), tuple(body.pre))
        return body

    top = compositions(model.starting_component)
    return ServiceSpec(
        compositions=top,
        definitions=tuple(Definition(name, items) for name, items in definitions.items()),
    )
