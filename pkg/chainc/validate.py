"""
Structural validation of service specs and component models
Every check returns diagnostics instead of raising; callers decide whether
errors are fatal
"""

from collections import Counter
from typing import Dict, Iterable, List, Optional, Set

import networkx as nx

from chainc import errors as E
from chainc.config import (
    BRANCH_ID_MAX,
    BRANCH_ID_MIN,
    COMPONENT_ID_RE,
    DIRECTIONS,
    FUNCTION_NAME_RE,
    KEYWORDS,
    REPLICATIONS_MAX,
    REPLICATIONS_MIN,
)
from chainc.errors import Diagnostic
from chainc.model import (
    AllBindings,
    BestBinding,
    BranchRef,
    ComponentModel,
    Composition,
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


def is_function_name(name: object) -> bool:
    return isinstance(name, str) and bool(FUNCTION_NAME_RE.match(name)) and name not in KEYWORDS


def is_component_id(name: object) -> bool:
    return isinstance(name, str) and bool(COMPONENT_ID_RE.match(name))


def _check_name(name: str, path: str, out: List[Diagnostic]) -> None:
    if not is_function_name(name):
        out.append(E.error(E.E_BAD_NAME, f"invalid function name {name!r}", path))


def _check_function_set(functions: Iterable[str], kind: str, path: str, out: List[Diagnostic]) -> None:
    functions = list(functions)
    if not functions:
        out.append(E.error(E.E_EMPTY_SET, f"{kind} needs at least one function", path))
        return
    for i, name in enumerate(functions):
        _check_name(name, f"{path}.functions[{i}]", out)
    for name, count in Counter(functions).items():
        if count > 1:
            out.append(E.error(E.E_DUP_FUNCTION, f"{name!r} occurs {count} times in one {kind} set", path))


def _check_replications(replications: object, path: str, out: List[Diagnostic]) -> None:
    if (not isinstance(replications, int) or isinstance(replications, bool)
            or not REPLICATIONS_MIN <= replications <= REPLICATIONS_MAX):
        out.append(E.error(
            E.E_BAD_REPLICATIONS,
            f"replications must be {REPLICATIONS_MIN}..{REPLICATIONS_MAX}, got {replications!r}",
            path,
        ))


# ============================================================================
# ServiceSpec
# ============================================================================

class _SpecChecker:
    """Walks a ServiceSpec AST collecting diagnostics"""

    def __init__(self, spec: ServiceSpec, registry: Optional[Dict[str, str]] = None):
        self.spec = spec
        self.registry = registry or {}
        self.out: List[Diagnostic] = []
        self.definition_names: Set[str] = {d.name for d in spec.definitions}
        self.links: Dict[str, Set[str]] = {}
        self.unknown_reported: Set[str] = set()

    def function(self, name: str, path: str) -> None:
        _check_name(name, path, self.out)
        if self.registry and name not in self.registry and name not in self.unknown_reported:
            self.unknown_reported.add(name)
            self.out.append(E.warning(E.W_UNKNOWN_FUNCTION, f"{name!r} is not in the function registry", path))

    def functions(self, functions, kind: str, path: str) -> None:
        _check_function_set(functions, kind, path, self.out)
        for i, name in enumerate(functions):
            if self.registry and is_function_name(name):
                self.function(name, f"{path}.functions[{i}]")

    def compositions(self, items, path: str, owner: str) -> None:
        for i, item in enumerate(items):
            self.composition(item, f"{path}[{i}]", owner)

    def composition(self, comp: Composition, path: str, owner: str) -> None:
        if isinstance(comp, Single):
            self.function(comp.function, path)
        elif isinstance(comp, Sequence):
            if not comp.items:
                self.out.append(E.error(E.E_EMPTY_SEQUENCE, "sequence needs at least one composition", path))
            self.compositions(comp.items, f"{path}.items", owner)
        elif isinstance(comp, BestBinding):
            self.functions(comp.functions, "best-binding", path)
        elif isinstance(comp, AllBindings):
            self.functions(comp.functions, "all-bindings", path)
        elif isinstance(comp, Split):
            self.split(comp, path, owner)
        elif isinstance(comp, LinkRef):
            self.link(comp, path, owner)
        else:
            self.out.append(E.error(E.E_INVALID_SPEC, f"unknown composition {type(comp).__name__}", path))

    def split(self, comp: Split, path: str, owner: str) -> None:
        self.function(comp.splitter, f"{path}.splitter")
        if comp.pre:
            self.functions(comp.pre, "best-binding", f"{path}.pre")
        if not comp.branches:
            self.out.append(E.error(E.E_EMPTY_SPLIT, "split needs at least one branch", path))
            return
        for i, branch in enumerate(comp.branches):
            branch_path = f"{path}.branches[{i}]"
            if isinstance(branch, NormalBranch):
                if not branch.body:
                    self.out.append(E.error(E.E_EMPTY_BRANCH, "branch needs at least one composition", branch_path))
                _check_replications(branch.replications, branch_path, self.out)
                self.compositions(branch.body, f"{branch_path}.body", owner)
            elif not isinstance(branch, PassBranch):
                self.out.append(E.error(E.E_INVALID_SPEC, f"unknown branch {type(branch).__name__}", branch_path))
        if all(isinstance(b, PassBranch) for b in comp.branches):
            self.out.append(E.warning(E.W_ALL_PASS, "every branch of this split is pass", path))

    def link(self, comp: LinkRef, path: str, owner: str) -> None:
        if not is_component_id(comp.target):
            self.out.append(E.error(E.E_BAD_COMPONENT_ID, f"invalid component id {comp.target!r}", path))
            return
        if comp.target in self.definition_names:
            self.links.setdefault(owner, set()).add(comp.target)
        else:
            self.out.append(E.warning(
                E.W_EXTERNAL_REF, f"{comp.target!r} is not defined here; it must come from a catalog", path))

    def run(self) -> List[Diagnostic]:
        spec = self.spec
        if spec.direction not in DIRECTIONS:
            self.out.append(E.error(E.E_BAD_DIRECTION, f"direction must be one of {DIRECTIONS}", "direction"))
        if not spec.compositions:
            self.out.append(E.error(E.E_EMPTY_SPEC, "service needs at least one composition", "compositions"))
        self.compositions(spec.compositions, "compositions", owner="")

        seen: Set[str] = set()
        for definition in spec.definitions:
            path = f"definitions[{definition.name}]"
            if not is_component_id(definition.name):
                self.out.append(E.error(E.E_BAD_COMPONENT_ID, f"invalid component id {definition.name!r}", path))
            if definition.name in seen:
                self.out.append(E.error(E.E_DUP_DEFINITION, f"component {definition.name!r} defined twice", path))
            seen.add(definition.name)
            if not definition.compositions:
                self.out.append(E.error(E.E_EMPTY_SEQUENCE, "component needs at least one composition", path))
            self.compositions(definition.compositions, f"{path}.compositions", owner=definition.name)

        self._check_definition_graph()
        return self.out

    def _check_definition_graph(self) -> None:
        graph = nx.DiGraph()
        graph.add_node("")
        graph.add_nodes_from(self.definition_names)
        for owner, targets in self.links.items():
            for target in targets:
                graph.add_edge(owner, target)
        for members in sorted(_cycles(graph), key=lambda m: m[0]):
            self.out.append(E.error(
                E.E_CYCLIC_REF, f"components link each other in a cycle: {' -> '.join(members)}",
                f"definitions[{members[0]}]"))
        used = nx.descendants(graph, "")
        for definition in self.spec.definitions:
            if definition.name not in used:
                self.out.append(E.warning(
                    E.W_UNUSED_DEFINITION, f"component {definition.name!r} is never linked",
                    f"definitions[{definition.name}]"))


def _cycles(graph: nx.DiGraph) -> List[List[str]]:
    """Strongly connected components that form a cycle (size > 1 or self-loop)"""
    cycles = []
    for scc in nx.strongly_connected_components(graph):
        members = sorted(scc)
        if len(members) > 1 or graph.has_edge(members[0], members[0]):
            cycles.append(members)
    return cycles


def validate_spec(spec: ServiceSpec, registry: Optional[Dict[str, str]] = None) -> List[Diagnostic]:
    """
    Check a ServiceSpec against the grammar and model invariants

    Args:
        spec: Parsed or hand-built spec
        registry: Optional function registry (name -> vnf|endpoint); when non-empty,
            names missing from it produce W_UNKNOWN_FUNCTION warnings

    Returns:
        Diagnostics; empty iff the spec is valid and warning-free
    """
    return _SpecChecker(spec, registry).run()


# ============================================================================
# ComponentModel
# ============================================================================

def check_references(model: ComponentModel, allow_external: bool = False) -> List[Diagnostic]:
    """
    Check the component-ref leaves of a model

    Args:
        model: Component model
        allow_external: Report links to unknown components as W_EXTERNAL_REF
            (catalog references) instead of E_UNRESOLVED_REF

    Returns:
        E_BAD_START, E_UNRESOLVED_REF and E_CYCLIC_REF diagnostics
    """
    out: List[Diagnostic] = []
    ids = {component.id for component in model.components}
    if model.starting_component not in ids:
        out.append(E.error(
            E.E_BAD_START, f"starting component {model.starting_component!r} does not exist",
            "starting-component"))

    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(ids))
    for source, path, target, kind in iter_references(model):
        if target in ids:
            graph.add_edge(source, target)
        elif kind == "link" and allow_external:
            out.append(E.warning(E.W_EXTERNAL_REF, f"{target!r} is not a local component", path))
        else:
            out.append(E.error(E.E_UNRESOLVED_REF, f"component {target!r} does not exist", path))

    for members in sorted(_cycles(graph), key=lambda m: m[0]):
        out.append(E.error(
            E.E_CYCLIC_REF, f"components reference each other in a cycle: {', '.join(members)}",
            f"service-component[{members[0]}]"))
    return out


def validate_model(model: ComponentModel, allow_external: bool = False) -> List[Diagnostic]:
    """
    Full structural check of a component model

    Covers identifiers, function sets, list-key uniqueness, branch ranges and
    everything check_references() reports.

    Args:
        model: Component model
        allow_external: Passed through to check_references()

    Returns:
        Diagnostics; no errors means the model is safe to serialize and expand
    """
    out: List[Diagnostic] = []
    if not is_component_id(model.starting_component):
        out.append(E.error(E.E_BAD_COMPONENT_ID,
                           f"invalid component id {model.starting_component!r}", "starting-component"))

    for component, count in Counter(c.id for c in model.components).items():
        if count > 1:
            out.append(E.error(E.E_DUP_COMPONENT, f"component id {component!r} used {count} times",
                               f"service-component[{component}]"))

    for component in model.components:
        cpath = f"service-component[{component.id}]"
        if not is_component_id(component.id):
            out.append(E.error(E.E_BAD_COMPONENT_ID, f"invalid component id {component.id!r}", cpath))
        if not component.compositions:
            out.append(E.error(E.E_EMPTY_SEQUENCE, "component needs at least one composition", cpath))
        for cid, count in Counter(e.id for e in component.compositions).items():
            if count > 1:
                out.append(E.error(E.E_DUP_COMPOSITION, f"composition id {cid!r} used {count} times", cpath))
        for entry in component.compositions:
            path = f"{cpath}/compositions[{entry.id}]"
            if not is_component_id(entry.id):
                out.append(E.error(E.E_BAD_COMPONENT_ID, f"invalid composition id {entry.id!r}", path))
            _check_flat_body(entry.body, path, out)

    out.extend(check_references(model, allow_external=allow_external))
    return out


def _check_flat_body(body, path: str, out: List[Diagnostic]) -> None:
    if isinstance(body, Single):
        _check_name(body.function, f"{path}/single-function", out)
    elif isinstance(body, Sequence):
        if not body.items:
            out.append(E.error(E.E_EMPTY_SEQUENCE, "sequence needs at least one function", path))
        for i, item in enumerate(body.items):
            if not isinstance(item, Single):
                out.append(E.error(E.E_INVALID_MODEL, "flat sequences hold function names only", path))
            else:
                _check_name(item.function, f"{path}/sequence-functions[{i}]", out)
    elif isinstance(body, BestBinding):
        _check_function_set(body.functions, "best-binding", path, out)
    elif isinstance(body, AllBindings):
        _check_function_set(body.functions, "all-bindings", path, out)
    elif isinstance(body, FlatSplit):
        _check_name(body.splitter, f"{path}/splitter-function", out)
        if body.pre:
            _check_function_set(body.pre, "best-binding", f"{path}/optional-best-binding", out)
        if not body.branches:
            out.append(E.error(E.E_EMPTY_SPLIT, "split needs at least one branch", path))
            return
        for branch_id, count in Counter(b.branch_id for b in body.branches).items():
            if count > 1:
                out.append(E.error(E.E_DUP_BRANCH, f"branch id {branch_id} used {count} times", path))
        for branch in body.branches:
            bpath = f"{path}/outgoing-branches[{branch.branch_id}]"
            if not BRANCH_ID_MIN <= branch.branch_id <= BRANCH_ID_MAX:
                out.append(E.error(E.E_BAD_BRANCH_ID,
                                   f"branch id must be {BRANCH_ID_MIN}..{BRANCH_ID_MAX}", bpath))
            if isinstance(branch, BranchRef):
                _check_replications(branch.replications, bpath, out)
                if not is_component_id(branch.target):
                    out.append(E.error(E.E_BAD_COMPONENT_ID, f"invalid component id {branch.target!r}", bpath))
        if all(isinstance(b, PassRef) for b in body.branches):
            out.append(E.warning(E.W_ALL_PASS, "every branch of this split is pass", path))
    elif isinstance(body, LinkRef):
        if not is_component_id(body.target):
            out.append(E.error(E.E_BAD_COMPONENT_ID, f"invalid component id {body.target!r}", path))
    else:
        out.append(E.error(E.E_INVALID_MODEL, f"unknown composition {type(body).__name__}", path))
