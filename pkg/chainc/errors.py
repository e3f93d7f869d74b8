"""
Diagnostics and exceptions shared by every chainc module
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

ERROR = "error"
WARNING = "warning"

# Spec / model structure
E_BAD_NAME = "E_BAD_NAME"
E_BAD_COMPONENT_ID = "E_BAD_COMPONENT_ID"
E_EMPTY_SPEC = "E_EMPTY_SPEC"
E_EMPTY_SEQUENCE = "E_EMPTY_SEQUENCE"
E_EMPTY_SET = "E_EMPTY_SET"
E_DUP_FUNCTION = "E_DUP_FUNCTION"
E_EMPTY_SPLIT = "E_EMPTY_SPLIT"
E_EMPTY_BRANCH = "E_EMPTY_BRANCH"
E_BAD_REPLICATIONS = "E_BAD_REPLICATIONS"
E_BAD_BRANCH_ID = "E_BAD_BRANCH_ID"
E_BAD_DIRECTION = "E_BAD_DIRECTION"
E_DUP_DEFINITION = "E_DUP_DEFINITION"
E_DUP_COMPONENT = "E_DUP_COMPONENT"
E_DUP_COMPOSITION = "E_DUP_COMPOSITION"
E_DUP_BRANCH = "E_DUP_BRANCH"
E_INVALID_SPEC = "E_INVALID_SPEC"
E_INVALID_MODEL = "E_INVALID_MODEL"

# References
E_UNRESOLVED_REF = "E_UNRESOLVED_REF"
E_CYCLIC_REF = "E_CYCLIC_REF"
E_BAD_START = "E_BAD_START"

# Text and documents
E_PARSE = "E_PARSE"
E_MALFORMED = "E_MALFORMED"
E_SCHEMA = "E_SCHEMA"
E_RANGE = "E_RANGE"

# Expansion
E_CAP_EXCEEDED = "E_CAP_EXCEEDED"
E_INVALID_POLICY = "E_INVALID_POLICY"
E_EMPTY_CANDIDATES = "E_EMPTY_CANDIDATES"

# Graphs
E_UNREACHABLE_NODE = "E_UNREACHABLE_NODE"

# Catalog
E_DUPLICATE_NAME = "E_DUPLICATE_NAME"
E_NOT_FOUND = "E_NOT_FOUND"
E_IO = "E_IO"

# Warnings
W_ALL_PASS = "W_ALL_PASS"
W_DANGLING_PASS = "W_DANGLING_PASS"
W_EXTERNAL_REF = "W_EXTERNAL_REF"
W_UNUSED_DEFINITION = "W_UNUSED_DEFINITION"
W_UNKNOWN_FUNCTION = "W_UNKNOWN_FUNCTION"
W_UNKNOWN_KEY = "W_UNKNOWN_KEY"


@dataclass(frozen=True)
class Diagnostic:
    """One finding about a spec, model, document or graph"""

    severity: str
    code: str
    message: str
    path: str = "/"

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def format(self) -> str:
        return f"{self.code}: {self.message} @ {self.path}"


def error(code: str, message: str, path: str = "/") -> Diagnostic:
    return Diagnostic(ERROR, code, message, path)


def warning(code: str, message: str, path: str = "/") -> Diagnostic:
    return Diagnostic(WARNING, code, message, path)


def errors_only(diagnostics: Iterable[Diagnostic]) -> List[Diagnostic]:
    return [d for d in diagnostics if d.is_error]


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


class ChaincError(Exception):
    """
    Base exception of the toolchain

    Args:
        code: Stable error code (E_...)
        message: Human-readable message
        diagnostics: Diagnostics explaining the failure, if any
    """

    def __init__(self, code: str, message: str, diagnostics: Sequence[Diagnostic] = ()):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.diagnostics: Tuple[Diagnostic, ...] = tuple(diagnostics)

    def as_diagnostics(self) -> List[Diagnostic]:
        """Diagnostics to print for this error (falls back to the error itself)"""
        if self.diagnostics:
            return list(self.diagnostics)
        return [error(self.code, self.message)]


Span = Tuple[Tuple[int, int], Tuple[int, int]]


class ParseError(ChaincError):
    """Syntax error in service text, located by a (line, column) span"""

    def __init__(self, message: str, span: Span, expected: Iterable[str] = ()):
        self.span = span
        self.expected = tuple(sorted(set(expected)))
        (line, column), _ = span
        detail = message
        if self.expected:
            detail = f"{message} (expected one of: {', '.join(self.expected)})"
        super().__init__(E_PARSE, detail, [error(E_PARSE, detail, f"{line}:{column}")])


class CapExceededError(ChaincError):
    """Enumeration would produce more candidate graphs than the cap allows"""

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(E_CAP_EXCEEDED, f"enumeration would produce {count} graphs, cap is {cap}")


class CatalogError(ChaincError):
    """Catalog store failure (missing entry, duplicate name, unreadable file)"""
