#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Instance-document schema for the flexible-service-specification module
JSON Schema for the JSON encoding of the YANG tree, plus the node tables the
XML reader needs (list nodes, integer leaves, containers)
"""

import json

from chainc.config import (
    BRANCH_ID_MAX,
    BRANCH_ID_MIN,
    IDENTIFIER_SEGMENT,
    JSON_ROOT_KEY,
    KEYWORDS,
    PASS_LEAF_VALUE,
    REPLICATIONS_MAX,
    REPLICATIONS_MIN,
    YANG_MODULE,
)

# ============================================================================
# Leaf types
# service-function: a function name that is not a grammar keyword
# component-ref / identifiers: dot-qualified names, no segment "pass"
# ============================================================================
SERVICE_FUNCTION = {
    "type": "string",
    "pattern": r"^[A-Za-z_][A-Za-z0-9_-]*$",
    "not": {"enum": list(KEYWORDS)},
}

IDENTIFIER = {
    "type": "string",
    "pattern": rf"^{IDENTIFIER_SEGMENT}(\.{IDENTIFIER_SEGMENT})*$",
}

FUNCTION_LIST = {"type": "array", "items": SERVICE_FUNCTION, "minItems": 1}

# ============================================================================
# outgoing-branches* [branch-id]
# choice branch-type: normal-branch (composition, replications?) | pass (string)
# ============================================================================
BRANCH_SCHEMA = {
    "type": "object",
    "properties": {
        "branch-id": {"type": "integer", "minimum": BRANCH_ID_MIN, "maximum": BRANCH_ID_MAX},
        "composition": IDENTIFIER,
        "replications": {"type": "integer", "minimum": REPLICATIONS_MIN, "maximum": REPLICATIONS_MAX},
        "string": {"const": PASS_LEAF_VALUE},
    },
    "required": ["branch-id"],
    "additionalProperties": False,
    "oneOf": [
        {"required": ["composition"]},
        {"required": ["string"]},
    ],
    "dependencies": {"replications": ["composition"]},
}

# ============================================================================
# compositions* [composition-identifier]
# choice composition-type: exactly one variant payload
# ============================================================================
COMPOSITION_SCHEMA = {
    "type": "object",
    "properties": {
        "composition-identifier": IDENTIFIER,
        "sequence-functions": FUNCTION_LIST,
        "best-binding-functions": FUNCTION_LIST,
        "all-bindings-functions": FUNCTION_LIST,
        "splitter-function": SERVICE_FUNCTION,
        "optional-best-binding": {"type": "array", "items": SERVICE_FUNCTION},
        "outgoing-branches": {"type": "array", "items": BRANCH_SCHEMA, "minItems": 1},
        "single-function": SERVICE_FUNCTION,
        "composition": IDENTIFIER,
    },
    "required": ["composition-identifier"],
    "additionalProperties": False,
    "oneOf": [
        {"required": ["sequence-functions"]},
        {"required": ["best-binding-functions"]},
        {"required": ["all-bindings-functions"]},
        {"required": ["splitter-function"]},
        {"required": ["single-function"]},
        {"required": ["composition"]},
    ],
    "dependencies": {
        "splitter-function": ["outgoing-branches"],
        "outgoing-branches": ["splitter-function"],
        "optional-best-binding": ["splitter-function"],
    },
}

COMPONENT_SCHEMA = {
    "type": "object",
    "properties": {
        "component-identifier": IDENTIFIER,
        "compositions": {"type": "array", "items": COMPOSITION_SCHEMA, "minItems": 1},
    },
    "required": ["component-identifier", "compositions"],
    "additionalProperties": False,
}

SPECIFICATION_SCHEMA = {
    "type": "object",
    "properties": {
        "starting-component": IDENTIFIER,
        "service-component": {"type": "array", "items": COMPONENT_SCHEMA, "minItems": 1},
    },
    "required": ["starting-component", "service-component"],
    "additionalProperties": False,
}

INSTANCE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": f"{YANG_MODULE} instance document",
    "type": "object",
    "properties": {JSON_ROOT_KEY: SPECIFICATION_SCHEMA},
    "required": [JSON_ROOT_KEY],
    "additionalProperties": False,
}

# ============================================================================
# Node tables
# ============================================================================

# Every node name of the YANG tree; emitted documents use nothing else
NODE_NAMES = frozenset([
    "specification",
    "starting-component",
    "service-component",
    "component-identifier",
    "compositions",
    "composition-identifier",
    "sequence-functions",
    "best-binding-functions",
    "all-bindings-functions",
    "splitter-function",
    "optional-best-binding",
    "outgoing-branches",
    "branch-id",
    "composition",
    "replications",
    "string",
    "single-function",
])

# Lists and leaf-lists: repeated elements in XML, arrays in JSON
LIST_NODES = frozenset([
    "service-component",
    "compositions",
    "outgoing-branches",
    "sequence-functions",
    "best-binding-functions",
    "all-bindings-functions",
    "optional-best-binding",
])

# Nodes with child nodes
CONTAINER_NODES = frozenset(["specification", "service-component", "compositions", "outgoing-branches"])

# uint8 leaves
INTEGER_LEAVES = frozenset(["branch-id", "replications"])

NODE_DESCRIPTIONS = {
    'service-component': {
        'description': 'Named flat unit of compositions; nesting is expressed by reference',
        'key': 'component-identifier',
    },
    'compositions': {
        'description': 'Ordered compositions of a component, traversed in list order',
        'key': 'composition-identifier',
    },
    'outgoing-branches': {
        'description': 'Branches of a split; normal branches reference a component, pass skips',
        'key': 'branch-id',
    },
}


def get_schema() -> dict:
    """
    JSON Schema of the instance document (JSON encoding)

    Returns:
        Draft-07 schema dictionary
    """
    return INSTANCE_SCHEMA


if __name__ == "__main__":
    print("=" * 80)
    print(f"Instance document schema for module {YANG_MODULE}")
    print("=" * 80)
    for node, info in NODE_DESCRIPTIONS.items():
        print(f"\n{node}* [{info['key']}]")
        print(f"  {info['description']}")
    print()
    print(json.dumps(get_schema(), indent=2))
