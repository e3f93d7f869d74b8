"""
chainc configuration
Keywords, identifier patterns, YANG document constants, expansion defaults,
DOT styling and catalog layout used across the toolchain
"""

import re

# Grammar keywords (bold terminals of the service grammar)
KEYWORDS = ("service", "best-binding", "all-bindings", "split", "pass")

# Contextual words of the text extensions; still valid function names
LINK_WORD = "link"
COMPONENT_WORD = "component"

# Function names: letters, digits, underscore and hyphen, not led by a digit
FUNCTION_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")

# Component / composition ids: same alphabet, dot-qualified for catalog imports;
# no segment may be the keyword "pass"
IDENTIFIER_SEGMENT = r"(?!pass(?![A-Za-z0-9_-]))[A-Za-z_][A-Za-z0-9_-]*"
COMPONENT_ID_RE = re.compile(rf"{IDENTIFIER_SEGMENT}(\.{IDENTIFIER_SEGMENT})*\Z")

# Ids generated by normalize()
ROOT_COMPONENT_PREFIX = "c"
COMPOSITION_PREFIX = "k"

# Service direction metadata
DIRECTIONS = ("forward", "symmetric")
DEFAULT_DIRECTION = "forward"

# YANG uint8 bounds
BRANCH_ID_MIN = 0
BRANCH_ID_MAX = 255
REPLICATIONS_MIN = 1
REPLICATIONS_MAX = 255

# Instance documents
YANG_MODULE = "flexible-service-specification"
YANG_NAMESPACE = "urn:chainc:flexible-service-specification"
JSON_ROOT_KEY = f"{YANG_MODULE}:specification"
XML_ROOT_TAG = "specification"
PASS_LEAF_VALUE = "pass"
JSON_INDENT = 2

# Expansion
EXPANSION_MODES = ("first", "enumerate", "select", "annotate")
DEFAULT_CAP = 10000
COST_MODELS = ("edge-count", "adjacency-pref")

# DOT output
DOT_GRAPH_NAME = "forwarding-graph"
DOT_NODE_SHAPE = "box"
DOT_SPLITTER_SHAPE = "diamond"
DOT_ENDPOINT_SHAPE = "ellipse"

# Statistics line printed per graph by `chainc expand`
STATS_LINE_FORMAT = "nodes={nodes} edges={edges} entries={entries} exits={exits} flexgroups={flexgroups}"

# Catalog store layout
CATALOG_INDEX_FILE = "index.txt"
CATALOG_FUNCTIONS_FILE = "functions.txt"
CATALOG_ENTRY_SUFFIX = ".json"
FUNCTION_KINDS = ("vnf", "endpoint")

# Environment variables
CATALOG_ENV_VAR = "CHAINC_CATALOG"
NO_COLOR_ENV_VAR = "NO_COLOR"

# File extension -> document format
FORMAT_BY_EXTENSION = {
    ".sfc": "dsl",
    ".json": "json",
    ".xml": "xml",
}
FORMATS = ("dsl", "json", "xml")

# CLI exit codes
EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_CAP_EXCEEDED = 4
