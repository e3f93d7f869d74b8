"""
Cost models for forwarding-graph selection
"""

from typing import Dict, Iterable, List, Optional, Tuple

from chainc import errors as E
from chainc.errors import ChaincError

Preference = Tuple[str, str]


class CostModel:
    """Base class for a cost model: a deterministic, total map graph -> float"""

    name = "cost"

    def evaluate(self, graph) -> float:
        raise NotImplementedError

    def __call__(self, graph) -> float:
        return self.evaluate(graph)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


class EdgeCountCost(CostModel):
    """Cost = number of steering edges"""

    name = "edge-count"

    def evaluate(self, graph) -> float:
        return float(len(graph.edges))


class AdjacencyPreferenceCost(CostModel):
    """
    Cost = number of adjacent pairs that contradict a preference

    An edge u -> v violates (before, after) when v runs `before` and u runs
    `after`, i.e. the preferred order is reversed on that hop.

    Args:
        preferences: (before, after) function-name pairs
    """

    name = "adjacency-pref"

    def __init__(self, preferences: Iterable[Preference] = ()):
        self.preferences = tuple(dict.fromkeys(tuple(p) for p in preferences))
        self._reversed = {(after, before) for before, after in self.preferences}

    def evaluate(self, graph) -> float:
        functions: Dict[str, str] = {node.instance_id: node.function for node in graph.nodes}
        violations = sum(1 for u, v in graph.edges if (functions[u], functions[v]) in self._reversed)
        return float(violations)

    def __repr__(self) -> str:
        return f"AdjacencyPreferenceCost({list(self.preferences)!r})"


def parse_preference(text: str) -> Preference:
    """Parse a `before:after` preference argument"""
    before, sep, after = text.partition(":")
    if not sep or not before or not after or ":" in after:
        raise ValueError(f"preference must look like before:after, got {text!r}")
    return before, after


def get_cost_model(name: str, preferences: Optional[List[Preference]] = None) -> CostModel:
    """
    Build a built-in cost model by name

    Args:
        name: "edge-count" or "adjacency-pref"
        preferences: (before, after) pairs for adjacency-pref

    Returns:
        CostModel instance
    """
    if name == EdgeCountCost.name:
        return EdgeCountCost()
    if name == AdjacencyPreferenceCost.name:
        return AdjacencyPreferenceCost(preferences or ())
    raise ChaincError(E.E_INVALID_POLICY, f"unknown cost model {name!r}")
