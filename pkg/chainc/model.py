"""
Service composition types
The recursive AST produced by the grammar and the flat, reference-linked
component model that mirrors the YANG specification tree. All values are
immutable; validation lives in chainc.validate
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, Optional, Tuple, Union

from chainc.config import DEFAULT_DIRECTION


# ============================================================================
# AST
# ============================================================================

@dataclass(frozen=True)
class Single:
    function: str


@dataclass(frozen=True)
class Sequence:
    items: Tuple["Composition", ...]


@dataclass(frozen=True)
class BestBinding:
    functions: Tuple[str, ...]


@dataclass(frozen=True)
class AllBindings:
    functions: Tuple[str, ...]


@dataclass(frozen=True)
class LinkRef:
    target: str


@dataclass(frozen=True)
class NormalBranch:
    body: Tuple["Composition", ...]
    replications: int = 1


@dataclass(frozen=True)
class PassBranch:
    pass


Branch = Union[NormalBranch, PassBranch]


@dataclass(frozen=True)
class Split:
    splitter: str
    branches: Tuple[Branch, ...]
    pre: Tuple[str, ...] = ()


Composition = Union[Single, Sequence, BestBinding, AllBindings, Split, LinkRef]


@dataclass(frozen=True)
class Definition:
    """Named component written after the service block (`component <id> { ... }`)"""

    name: str
    compositions: Tuple[Composition, ...]


@dataclass(frozen=True)
class ServiceSpec:
    compositions: Tuple[Composition, ...]
    direction: str = DEFAULT_DIRECTION
    definitions: Tuple[Definition, ...] = ()

    def definition(self, name: str) -> Optional[Definition]:
        for definition in self.definitions:
            if definition.name == name:
                return definition
        return None


# ============================================================================
# Flat component model
# ============================================================================

@dataclass(frozen=True)
class BranchRef:
    """Normal outgoing branch: the branch body is another component"""

    branch_id: int
    target: str
    replications: int = 1


@dataclass(frozen=True)
class PassRef:
    """Pass outgoing branch"""

    branch_id: int


FlatBranch = Union[BranchRef, PassRef]


@dataclass(frozen=True)
class FlatSplit:
    splitter: str
    branches: Tuple[FlatBranch, ...]
    pre: Tuple[str, ...] = ()


# Sequence here only ever holds Singles (YANG `sequence-functions`)
FlatComposition = Union[Single, Sequence, BestBinding, AllBindings, FlatSplit, LinkRef]


@dataclass(frozen=True)
class CompositionEntry:
    id: str
    body: FlatComposition


@dataclass(frozen=True)
class Component:
    id: str
    compositions: Tuple[CompositionEntry, ...]


@dataclass(frozen=True)
class ComponentModel:
    starting_component: str
    components: Tuple[Component, ...] = field(default_factory=tuple)

    def component_map(self) -> Dict[str, Component]:
        """Map component id -> component (first occurrence wins on duplicates)"""
        result: Dict[str, Component] = {}
        for component in self.components:
            result.setdefault(component.id, component)
        return result

    def get(self, component_id: str) -> Optional[Component]:
        return self.component_map().get(component_id)


def sequence_functions(body: Sequence) -> Tuple[str, ...]:
    """Function names of a flat sequence composition"""
    return tuple(item.function for item in body.items)


def iter_references(model: ComponentModel) -> Iterator[Tuple[str, str, str, str]]:
    """
    Walk every component reference in a model

    Yields:
        (source component id, path, target component id, kind) where kind is
        "branch" for split branch bodies and "link" for link-to-composition
    """
    for component in model.components:
        for entry in component.compositions:
            base = f"service-component[{component.id}]/compositions[{entry.id}]"
            body = entry.body
            if isinstance(body, LinkRef):
                yield component.id, f"{base}/composition", body.target, "link"
            elif isinstance(body, FlatSplit):
                for branch in body.branches:
                    if isinstance(branch, BranchRef):
                        yield (component.id,
                               f"{base}/outgoing-branches[{branch.branch_id}]/composition",
                               branch.target, "branch")
