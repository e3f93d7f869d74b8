"""
chainc: compiler for flexible service function chain specifications

    parse / render                 service text <-> ServiceSpec
    normalize / inline             ServiceSpec <-> ComponentModel
    to_instance / from_instance    ComponentModel <-> YANG JSON/XML documents
    expand                         ComponentModel -> forwarding graphs
    to_dot / graph_stats           forwarding graph output
    catalog_*                      store of pre-composed services
"""

from chainc.catalog import CatalogStore, catalog_add, catalog_get, catalog_list, catalog_tag, resolve_links
from chainc.costs import AdjacencyPreferenceCost, CostModel, EdgeCountCost, get_cost_model
from chainc.errors import CapExceededError, CatalogError, ChaincError, Diagnostic, ParseError
from chainc.expansion import (
    ExpansionPolicy,
    FlexGroup,
    ForwardingGraph,
    NodeInstance,
    count_expansions,
    expand,
    select_best,
)
from chainc.grammar import parse, render, tokenize
from chainc.graph_emit import GraphStats, graph_stats, reachability_check, to_dot
from chainc.model import (
    AllBindings,
    BestBinding,
    BranchRef,
    Component,
    ComponentModel,
    CompositionEntry,
    Definition,
    FlatSplit,
    LinkRef,
    NormalBranch,
    PassBranch,
    PassRef,
    Sequence,
    ServiceSpec,
    Single,
    Split,
)
from chainc.normalize import inline, normalize
from chainc.validate import check_references, validate_model, validate_spec
from chainc.yang_io import InstanceDocument, from_instance, read_instance, to_instance

__version__ = "0.1.0"
