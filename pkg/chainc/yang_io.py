"""
YANG instance documents
Reads and writes ComponentModel as JSON or XML documents shaped like the
flexible-service-specification tree
"""

import json
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

from jsonschema import Draft7Validator
from lxml import etree

from chainc import errors as E
from chainc.config import (
    JSON_INDENT,
    JSON_ROOT_KEY,
    PASS_LEAF_VALUE,
    XML_ROOT_TAG,
    YANG_NAMESPACE,
)
from chainc.errors import ChaincError, Diagnostic
from chainc.model import (
    AllBindings,
    BestBinding,
    BranchRef,
    Component,
    ComponentModel,
    CompositionEntry,
    FlatComposition,
    FlatSplit,
    LinkRef,
    PassRef,
    Sequence,
    Single,
    sequence_functions,
)
from chainc.schema import CONTAINER_NODES, INTEGER_LEAVES, LIST_NODES, NODE_NAMES, get_schema
from chainc.validate import validate_model

_VALIDATOR = Draft7Validator(get_schema())
_RANGE_VALIDATORS = ("minimum", "maximum")


@dataclass(frozen=True)
class InstanceDocument:
    format: str
    body: str


# ============================================================================
# Writing
# ============================================================================

def _composition_tree(entry: CompositionEntry) -> Dict[str, Any]:
    node: Dict[str, Any] = {"composition-identifier": entry.id}
    body = entry.body
    if isinstance(body, Sequence):
        node["sequence-functions"] = list(sequence_functions(body))
    elif isinstance(body, BestBinding):
        node["best-binding-functions"] = list(body.functions)
    elif isinstance(body, AllBindings):
        node["all-bindings-functions"] = list(body.functions)
    elif isinstance(body, FlatSplit):
        node["splitter-function"] = body.splitter
        if body.pre:
            node["optional-best-binding"] = list(body.pre)
        branches = []
        for branch in body.branches:
            if isinstance(branch, PassRef):
                branches.append({"branch-id": branch.branch_id, "string": PASS_LEAF_VALUE})
            else:
                item: Dict[str, Any] = {"branch-id": branch.branch_id, "composition": branch.target}
                if branch.replications != 1:
                    item["replications"] = branch.replications
                branches.append(item)
        node["outgoing-branches"] = branches
    elif isinstance(body, Single):
        node["single-function"] = body.function
    elif isinstance(body, LinkRef):
        node["composition"] = body.target
    return node


def model_tree(model: ComponentModel) -> Dict[str, Any]:
    """The `specification` container as nested dicts/lists in document order"""
    return {
        "starting-component": model.starting_component,
        "service-component": [
            {
                "component-identifier": component.id,
                "compositions": [_composition_tree(entry) for entry in component.compositions],
            }
            for component in model.components
        ],
    }


def _qualified(name: str) -> str:
    return f"{{{YANG_NAMESPACE}}}{name}"


def _append_xml(parent, name: str, value: Any) -> None:
    if isinstance(value, list):
        for item in value:
            _append_xml(parent, name, item)
        return
    element = etree.SubElement(parent, _qualified(name))
    if isinstance(value, dict):
        for key, item in value.items():
            _append_xml(element, key, item)
    else:
        element.text = str(value)


def _tree_to_xml(tree: Dict[str, Any]) -> str:
    root = etree.Element(_qualified(XML_ROOT_TAG), nsmap={None: YANG_NAMESPACE})
    for key, value in tree.items():
        _append_xml(root, key, value)
    etree.indent(root, space=" " * JSON_INDENT)
    return etree.tostring(root, pretty_print=True, xml_declaration=True, encoding="UTF-8").decode("utf-8")


def to_instance(model: ComponentModel, format: str = "json") -> InstanceDocument:
    """
    Serialize a component model as an instance document

    Args:
        model: Valid model (catalog links may stay unresolved)
        format: "json" or "xml"

    Returns:
        Deterministic document text (2-space indentation, list order preserved)

    Raises:
        ChaincError: E_INVALID_MODEL when validate_model() reports errors
    """
    problems = E.errors_only(validate_model(model, allow_external=True))
    if problems:
        raise ChaincError(E.E_INVALID_MODEL, f"model has {len(problems)} error(s)", problems)
    tree = model_tree(model)
    if format == "json":
        body = json.dumps({JSON_ROOT_KEY: tree}, indent=JSON_INDENT, ensure_ascii=False) + "\n"
    elif format == "xml":
        body = _tree_to_xml(tree)
    else:
        raise ValueError(f"Unknown document format: {format}. Available: ['json', 'xml']")
    return InstanceDocument(format, body)


# ============================================================================
# Reading
# ============================================================================

def _load_json(body: str) -> Any:
    duplicates: List[str] = []

    def pairs_hook(pairs):
        node = {}
        for key, value in pairs:
            if key in node:
                duplicates.append(key)
            node[key] = value
        return node

    try:
        data = json.loads(body, object_pairs_hook=pairs_hook)
    except json.JSONDecodeError as e:
        raise ChaincError(E.E_MALFORMED, f"invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})")
    if duplicates:
        raise ChaincError(E.E_SCHEMA, f"duplicate keys: {', '.join(sorted(set(duplicates)))}")
    return data


def _local_key(element) -> str:
    qname = etree.QName(element)
    if qname.namespace in (None, YANG_NAMESPACE):
        return qname.localname
    return element.tag


def _xml_value(element, problems: List[Diagnostic], path: str) -> Any:
    children = [child for child in element if isinstance(child.tag, str)]
    key = _local_key(element)
    if children or key in CONTAINER_NODES:
        node: Dict[str, Any] = {}
        for child in children:
            child_key = _local_key(child)
            value = _xml_value(child, problems, f"{path}/{child_key}")
            if child_key in LIST_NODES:
                node.setdefault(child_key, []).append(value)
            elif child_key in node and child_key in NODE_NAMES:
                # unknown repeats are left to the schema check
                problems.append(E.error(E.E_SCHEMA, f"leaf {child_key!r} appears more than once", path))
            else:
                node[child_key] = value
        return node
    text = (element.text or "").strip()
    if key in INTEGER_LEAVES:
        try:
            return int(text)
        except ValueError:
            return text
    return text


def _load_xml(body: str) -> Any:
    parser = etree.XMLParser(remove_blank_text=True, resolve_entities=False, no_network=True)
    try:
        root = etree.fromstring(body.encode("utf-8"), parser)
    except etree.XMLSyntaxError as e:
        raise ChaincError(E.E_MALFORMED, f"invalid XML: {e}")
    qname = etree.QName(root)
    if qname.localname != XML_ROOT_TAG or qname.namespace != YANG_NAMESPACE:
        raise ChaincError(E.E_SCHEMA, f"root element must be {XML_ROOT_TAG} in namespace {YANG_NAMESPACE}")
    problems: List[Diagnostic] = []
    tree = _xml_value(root, problems, f"/{JSON_ROOT_KEY}")
    if problems:
        raise ChaincError(E.E_SCHEMA, problems[0].message, problems)
    return {JSON_ROOT_KEY: tree}


def _strip_unknown(node: Any, schema: Dict[str, Any], path: str, out: List[Diagnostic]) -> None:
    """Drop keys the schema does not know (lax mode), reporting each one"""
    if isinstance(node, dict) and "properties" in schema:
        for key in list(node):
            if key not in schema["properties"]:
                del node[key]
                out.append(E.warning(E.W_UNKNOWN_KEY, f"ignoring unknown key {key!r}", path or "/"))
            else:
                _strip_unknown(node[key], schema["properties"][key], f"{path}/{key}", out)
    elif isinstance(node, list) and isinstance(schema.get("items"), dict):
        for i, item in enumerate(node):
            _strip_unknown(item, schema["items"], f"{path}/{i}", out)


def _schema_diagnostics(data: Any) -> List[Diagnostic]:
    found = sorted(_VALIDATOR.iter_errors(data), key=lambda e: [str(p) for p in e.absolute_path])
    out = []
    for problem in found:
        code = E.E_RANGE if problem.validator in _RANGE_VALIDATORS else E.E_SCHEMA
        path = "/" + "/".join(str(p) for p in problem.absolute_path)
        out.append(E.error(code, problem.message, path))
    return out


def _body(node: Dict[str, Any]) -> FlatComposition:
    if "single-function" in node:
        return Single(node["single-function"])
    if "sequence-functions" in node:
        functions = node["sequence-functions"]
        if len(functions) == 1:
            return Single(functions[0])
        return Sequence(tuple(Single(name) for name in functions))
    if "best-binding-functions" in node:
        return BestBinding(tuple(node["best-binding-functions"]))
    if "all-bindings-functions" in node:
        return AllBindings(tuple(node["all-bindings-functions"]))
    if "splitter-function" in node:
        branches = []
        for branch in node["outgoing-branches"]:
            if "string" in branch:
                branches.append(PassRef(int(branch["branch-id"])))
            else:
                branches.append(BranchRef(int(branch["branch-id"]), branch["composition"],
                                          int(branch.get("replications", 1))))
        return FlatSplit(node["splitter-function"], tuple(branches), tuple(node.get("optional-best-binding", ())))
    return LinkRef(node["composition"])


def _tree_to_model(tree: Dict[str, Any]) -> ComponentModel:
    components = tuple(
        Component(
            item["component-identifier"],
            tuple(CompositionEntry(comp["composition-identifier"], _body(comp)) for comp in item["compositions"]),
        )
        for item in tree["service-component"]
    )
    return ComponentModel(tree["starting-component"], components)


def read_instance(doc: InstanceDocument, lax: bool = False) -> Tuple[ComponentModel, List[Diagnostic]]:
    """
    Deserialize an instance document, returning the model and its warnings

    Args:
        doc: JSON or XML document
        lax: Ignore unknown keys/elements (with W_UNKNOWN_KEY) instead of rejecting them

    Returns:
        (model, warnings)

    Raises:
        ChaincError: E_MALFORMED, E_SCHEMA, E_RANGE or a model diagnostic code
    """
    if doc.format == "json":
        data = _load_json(doc.body)
    elif doc.format == "xml":
        data = _load_xml(doc.body)
    else:
        raise ValueError(f"Unknown document format: {doc.format}. Available: ['json', 'xml']")

    warnings: List[Diagnostic] = []
    if lax:
        _strip_unknown(data, get_schema(), "", warnings)

    problems = _schema_diagnostics(data)
    if problems:
        code = E.E_SCHEMA if any(p.code == E.E_SCHEMA for p in problems) else E.E_RANGE
        raise ChaincError(code, problems[0].message, problems)

    model = _tree_to_model(data[JSON_ROOT_KEY])
    diagnostics = validate_model(model, allow_external=True)
    failures = E.errors_only(diagnostics)
    if failures:
        raise ChaincError(failures[0].code, failures[0].message, failures)
    warnings.extend(d for d in diagnostics if not d.is_error)
    return model, warnings


def from_instance(doc: InstanceDocument, lax: bool = False) -> ComponentModel:
    """
    Deserialize an instance document

    Args:
        doc: JSON or XML document
        lax: See read_instance()

    Returns:
        ComponentModel equal to the one that produced the document
    """
    return read_instance(doc, lax)[0]
