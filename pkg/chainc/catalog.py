"""
Catalog of pre-composed services
A directory of named ComponentModels stored as JSON instance documents, plus
the resolver that imports catalog entries into models linking to them.

Layout:
    <root>/index.txt        name<TAB>filename, one per line
    <root>/<name>.json      instance document
    <root>/functions.txt    name<TAB>vnf|endpoint (optional function registry)
"""

import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Union

from chainc import errors as E
from chainc.config import (
    CATALOG_ENTRY_SUFFIX,
    CATALOG_FUNCTIONS_FILE,
    CATALOG_INDEX_FILE,
    FUNCTION_KINDS,
)
from chainc.errors import CatalogError, ChaincError
from chainc.model import (
    BranchRef,
    Component,
    ComponentModel,
    CompositionEntry,
    FlatComposition,
    FlatSplit,
    LinkRef,
)
from chainc.validate import is_component_id, is_function_name, validate_model
from chainc.yang_io import InstanceDocument, read_instance, to_instance


@dataclass(frozen=True)
class CatalogRow:
    """One line of catalog_list(); error holds the code of an unreadable entry"""

    name: str
    summary: str
    error: Optional[str] = None


class CatalogStore:
    """
    Catalog directory

    Args:
        root: Store directory (created on first write)
    """

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)

    @property
    def index_path(self) -> Path:
        return self.root / CATALOG_INDEX_FILE

    @property
    def functions_path(self) -> Path:
        return self.root / CATALOG_FUNCTIONS_FILE

    def entry_path(self, filename: str) -> Path:
        return self.root / filename

    def read_table(self, path: Path) -> Dict[str, str]:
        if not path.exists():
            return {}
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise CatalogError(E.E_IO, f"cannot read {path}: {e}")
        table: Dict[str, str] = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            key, sep, value = line.partition("\t")
            if not sep:
                raise CatalogError(E.E_MALFORMED, f"{path.name}: line without a tab: {line!r}")
            table[key] = value
        return table

    def write_text(self, path: Path, text: str) -> None:
        """Write via a temp file in the same directory and rename over the target"""
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=self.root)
            try:
                with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                    f.write(text)
                    f.flush()
                    os.fsync(f.fileno())
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        except OSError as e:
            raise CatalogError(E.E_IO, f"cannot write {path}: {e}")

    def write_table(self, path: Path, table: Dict[str, str]) -> None:
        self.write_text(path, "".join(f"{key}\t{table[key]}\n" for key in sorted(table)))

    def read_index(self) -> Dict[str, str]:
        return self.read_table(self.index_path)

    def write_index(self, index: Dict[str, str]) -> None:
        self.write_table(self.index_path, index)

    def load_registry(self) -> Dict[str, str]:
        """Function registry (name -> vnf|endpoint); empty when the store has none"""
        return self.read_table(self.functions_path)

    def endpoints(self) -> List[str]:
        return sorted(name for name, kind in self.load_registry().items() if kind == "endpoint")


def catalog_add(store: CatalogStore, name: str, model: ComponentModel) -> Path:
    """
    Store a model under a new name

    Args:
        store: Catalog store
        name: Entry name (component-id pattern)
        model: Valid model; links to other catalog entries may stay unresolved

    Returns:
        Path of the written document

    Raises:
        CatalogError: E_BAD_COMPONENT_ID, E_DUPLICATE_NAME, E_INVALID_MODEL or E_IO
    """
    if not is_component_id(name):
        raise CatalogError(E.E_BAD_COMPONENT_ID, f"invalid catalog entry name {name!r}")
    index = store.read_index()
    if name in index:
        raise CatalogError(E.E_DUPLICATE_NAME, f"catalog entry {name!r} already exists")
    problems = E.errors_only(validate_model(model, allow_external=True))
    if problems:
        raise CatalogError(E.E_INVALID_MODEL, f"model has {len(problems)} error(s)", problems)

    filename = f"{name}{CATALOG_ENTRY_SUFFIX}"
    path = store.entry_path(filename)
    # 先写文档，再更新索引
    store.write_text(path, to_instance(model, "json").body)
    index[name] = filename
    store.write_index(index)
    return path


def catalog_get(store: CatalogStore, name: str) -> ComponentModel:
    """
    Load a catalog entry

    Raises:
        CatalogError: E_NOT_FOUND, E_MALFORMED or E_IO
    """
    index = store.read_index()
    if name not in index:
        raise CatalogError(E.E_NOT_FOUND, f"catalog entry {name!r} not found")
    path = store.entry_path(index[name])
    try:
        body = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise CatalogError(E.E_MALFORMED, f"document {path.name} of entry {name!r} is missing")
    except (OSError, UnicodeDecodeError) as e:
        raise CatalogError(E.E_IO, f"cannot read {path}: {e}")
    try:
        model, _ = read_instance(InstanceDocument("json", body))
    except ChaincError as e:
        raise CatalogError(E.E_MALFORMED, f"entry {name!r}: {e.message}", e.as_diagnostics())
    return model


def _summary(model: ComponentModel) -> str:
    compositions = sum(len(c.compositions) for c in model.components)
    return f"components={len(model.components)} compositions={compositions} start={model.starting_component}"


def catalog_list(store: CatalogStore) -> List[CatalogRow]:
    """
    All entries sorted by name

    Unreadable entries are listed with their error code instead of failing
    the whole listing.
    """
    rows = []
    for name in sorted(store.read_index()):
        try:
            rows.append(CatalogRow(name, _summary(catalog_get(store, name))))
        except CatalogError as e:
            rows.append(CatalogRow(name, e.message, e.code))
    return rows


def catalog_tag(store: CatalogStore, function: str, kind: str) -> None:
    """
    Record a function as vnf or endpoint in the store's registry

    Raises:
        CatalogError: E_BAD_NAME or E_IO
        ValueError: unknown kind
    """
    if kind not in FUNCTION_KINDS:
        raise ValueError(f"Unknown function kind: {kind}. Available: {list(FUNCTION_KINDS)}")
    if not is_function_name(function):
        raise CatalogError(E.E_BAD_NAME, f"invalid function name {function!r}")
    registry = store.load_registry()
    registry[function] = kind
    store.write_table(store.functions_path, registry)


# ============================================================================
# Link resolution
# ============================================================================

class _Resolver:
    def __init__(self, store: CatalogStore):
        self.store = store
        self.imported: List[Component] = []
        self.starts: Dict[str, str] = {}

    def import_entry(self, name: str, stack: List[str]) -> str:
        """Import an entry (and what it links to); returns its prefixed starting component"""
        if name in stack:
            raise CatalogError(E.E_CYCLIC_REF,
                               f"catalog entries link in a cycle: {' -> '.join(stack + [name])}")
        if name in self.starts:
            return self.starts[name]
        entry = catalog_get(self.store, name)
        local = {component.id for component in entry.components}

        def rename(component_id: str) -> str:
            return f"{name}.{component_id}"

        def link(target: str) -> str:
            if target in local:
                return rename(target)
            return self.import_entry(target, stack + [name])

        for component in entry.components:
            self.imported.append(Component(rename(component.id), _rewrite(component, rename, link)))
        self.starts[name] = rename(entry.starting_component)
        return self.starts[name]


def _rewrite(component: Component, branch_target, link_target) -> tuple:
    entries = []
    for entry in component.compositions:
        body: FlatComposition = entry.body
        if isinstance(body, LinkRef):
            body = LinkRef(link_target(body.target))
        elif isinstance(body, FlatSplit):
            branches = tuple(
                BranchRef(b.branch_id, branch_target(b.target), b.replications) if isinstance(b, BranchRef) else b
                for b in body.branches
            )
            body = FlatSplit(body.splitter, branches, body.pre)
        entries.append(CompositionEntry(entry.id, body))
    return tuple(entries)


def resolve_links(model: ComponentModel, store: CatalogStore) -> ComponentModel:
    """
    Satisfy external links from the catalog

    Each linked entry's components are imported as `<entry>.<componentId>`;
    the link then targets the entry's prefixed starting component. Entries
    linking further entries are imported recursively.

    Args:
        model: Model whose non-local links name catalog entries
        store: Catalog store

    Returns:
        Model with every reference resolving locally

    Raises:
        CatalogError: E_NOT_FOUND, E_CYCLIC_REF, E_MALFORMED
        ChaincError: E_INVALID_MODEL if the merged model is still invalid
    """
    resolver = _Resolver(store)
    local = {component.id for component in model.components}

    def link(target: str) -> str:
        if target in local:
            return target
        return resolver.import_entry(target, [])

    components = [Component(c.id, _rewrite(c, lambda t: t, link)) for c in model.components]
    merged = ComponentModel(model.starting_component, tuple(components) + tuple(resolver.imported))
    problems = E.errors_only(validate_model(merged))
    if problems:
        raise ChaincError(E.E_INVALID_MODEL, f"resolved model has {len(problems)} error(s)", problems)
    return merged
