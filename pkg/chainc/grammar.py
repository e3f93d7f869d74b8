"""
Service grammar frontend
Tokenizer, recursive-descent parser and canonical renderer for the
`service { ... }` text form, plus the `link(<id>)` and
`component <id> { ... }` extensions and `#` line comments
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence as Seq, Tuple

from chainc.config import (
    COMPONENT_WORD,
    DEFAULT_DIRECTION,
    LINK_WORD,
    REPLICATIONS_MAX,
)
from chainc.errors import ParseError, Span
from chainc.model import (
    AllBindings,
    BestBinding,
    Composition,
    Definition,
    LinkRef,
    NormalBranch,
    PassBranch,
    Sequence,
    ServiceSpec,
    Single,
    Split,
)


class TokenKind(str, Enum):
    KW_SERVICE = "service"
    KW_BEST_BINDING = "best-binding"
    KW_ALL_BINDINGS = "all-bindings"
    KW_SPLIT = "split"
    KW_PASS = "pass"
    LBRACE = "{"
    RBRACE = "}"
    LPAREN = "("
    RPAREN = ")"
    COMMA = ","
    SEMICOLON = ";"
    DOT = "."
    NUMBER = "NUMBER"
    IDENT = "IDENT"
    EOF = "EOF"


KEYWORD_KINDS = {
    "service": TokenKind.KW_SERVICE,
    "best-binding": TokenKind.KW_BEST_BINDING,
    "all-bindings": TokenKind.KW_ALL_BINDINGS,
    "split": TokenKind.KW_SPLIT,
    "pass": TokenKind.KW_PASS,
}

PUNCTUATION = {
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    ",": TokenKind.COMMA,
    ";": TokenKind.SEMICOLON,
    ".": TokenKind.DOT,
}

WHITESPACE = " \t\r\n"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: Span


def _is_ident_start(ch: str) -> bool:
    return ch == "_" or ("a" <= ch <= "z") or ("A" <= ch <= "Z")


def _is_ident_char(ch: str) -> bool:
    return _is_ident_start(ch) or ch == "-" or ch.isdigit() and ch.isascii()


def tokenize(source: str) -> List[Token]:
    """
    Split service text into tokens

    Args:
        source: Service text

    Returns:
        Tokens ending with EOF; spans are 1-based (line, column), end exclusive

    Raises:
        ParseError: on characters outside the alphabet and on numbers with a leading zero
    """
    tokens: List[Token] = []
    i = 0
    line, column = 1, 1
    n = len(source)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line, column = line + 1, 1
            continue
        if ch in WHITESPACE:
            i += 1
            column += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue

        start = (line, column)
        if ch in PUNCTUATION:
            tokens.append(Token(PUNCTUATION[ch], ch, (start, (line, column + 1))))
            i += 1
            column += 1
            continue

        j = i
        if _is_ident_start(ch):
            while j < n and _is_ident_char(source[j]):
                j += 1
            text = source[i:j]
            kind = KEYWORD_KINDS.get(text, TokenKind.IDENT)
        elif ch.isascii() and ch.isdigit():
            while j < n and source[j].isascii() and source[j].isdigit():
                j += 1
            text = source[i:j]
            if text[0] == "0":
                raise ParseError(f"number {text!r} has a leading zero", (start, (line, column + len(text))))
            kind = TokenKind.NUMBER
        else:
            raise ParseError(f"unexpected character {ch!r}", (start, (line, column + 1)))

        end = (line, column + len(text))
        tokens.append(Token(kind, text, (start, end)))
        column += len(text)
        i = j

    tokens.append(Token(TokenKind.EOF, "", ((line, column), (line, column))))
    return tokens


# ============================================================================
# Parser
# ============================================================================

# Tokens that may start a composition
_COMP_START = (TokenKind.KW_BEST_BINDING, TokenKind.KW_ALL_BINDINGS, TokenKind.KW_SPLIT, TokenKind.IDENT)
# Tokens usable as a component-id segment inside link(...)
_ID_SEGMENT = (TokenKind.IDENT, TokenKind.KW_SERVICE, TokenKind.KW_BEST_BINDING,
               TokenKind.KW_ALL_BINDINGS, TokenKind.KW_SPLIT)


class _Parser:
    """Recursive descent over the token list; first error wins"""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, *kinds: TokenKind) -> bool:
        return self.current.kind in kinds

    def fail(self, expected: Seq[TokenKind], message: str = "") -> ParseError:
        token = self.current
        found = "end of input" if token.kind == TokenKind.EOF else repr(token.text)
        return ParseError(message or f"unexpected {found}", token.span, [k.value for k in expected])

    def expect(self, kind: TokenKind) -> Token:
        if self.current.kind != kind:
            raise self.fail([kind])
        token = self.current
        self.pos += 1
        return token

    def accept(self, kind: TokenKind) -> bool:
        if self.current.kind == kind:
            self.pos += 1
            return True
        return False

    # <start> ::= service { <comp> (, <comp>)* } <definition>*
    def start(self) -> ServiceSpec:
        self.expect(TokenKind.KW_SERVICE)
        compositions = self.block()
        definitions = []
        while self.at(TokenKind.IDENT) and self.current.text == COMPONENT_WORD:
            self.pos += 1
            name = self.component_id()
            definitions.append(Definition(name, self.block()))
        if not self.at(TokenKind.EOF):
            if self.at(TokenKind.IDENT):
                raise self.fail([TokenKind.EOF], f"expected end of input or '{COMPONENT_WORD}'")
            raise self.fail([TokenKind.EOF])
        return ServiceSpec(compositions, DEFAULT_DIRECTION, tuple(definitions))

    def block(self) -> Tuple[Composition, ...]:
        self.expect(TokenKind.LBRACE)
        items = self.comp_list()
        self.expect_close([TokenKind.COMMA])
        return items

    def expect_close(self, alternatives: List[TokenKind]) -> None:
        if not self.accept(TokenKind.RBRACE):
            raise self.fail(alternatives + [TokenKind.RBRACE])

    def comp_list(self) -> Tuple[Composition, ...]:
        items = [self.comp()]
        while self.accept(TokenKind.COMMA):
            items.append(self.comp())
        return tuple(items)

    # <comp> ::= <bestbind> | <allbinds> | <splt> | link(<id>) | <func>
    def comp(self) -> Composition:
        if self.at(TokenKind.KW_BEST_BINDING):
            return BestBinding(self.bound_functions(TokenKind.KW_BEST_BINDING))
        if self.at(TokenKind.KW_ALL_BINDINGS):
            return AllBindings(self.bound_functions(TokenKind.KW_ALL_BINDINGS))
        if self.at(TokenKind.KW_SPLIT):
            return self.split()
        if self.at(TokenKind.IDENT):
            if self.current.text == LINK_WORD and self.peek().kind == TokenKind.LPAREN:
                return self.link()
            return Single(self.expect(TokenKind.IDENT).text)
        raise self.fail(list(_COMP_START))

    def bound_functions(self, keyword: TokenKind) -> Tuple[str, ...]:
        self.expect(keyword)
        self.expect(TokenKind.LBRACE)
        functions = self.functions()
        self.expect_close([TokenKind.COMMA])
        return functions

    # <functions> ::= <func> (, <func>)*   (the nested form is the same flat list)
    def functions(self) -> Tuple[str, ...]:
        names = [self.expect(TokenKind.IDENT).text]
        while self.accept(TokenKind.COMMA):
            names.append(self.expect(TokenKind.IDENT).text)
        return tuple(names)

    # <splt> ::= split { <func> (, <bestbind>)? (; <branch>)+ }
    def split(self) -> Split:
        self.expect(TokenKind.KW_SPLIT)
        self.expect(TokenKind.LBRACE)
        splitter = self.expect(TokenKind.IDENT).text
        pre: Tuple[str, ...] = ()
        if self.accept(TokenKind.COMMA):
            if not self.at(TokenKind.KW_BEST_BINDING):
                raise self.fail([TokenKind.KW_BEST_BINDING])
            pre = self.bound_functions(TokenKind.KW_BEST_BINDING)
        if not self.at(TokenKind.SEMICOLON):
            expected = [TokenKind.SEMICOLON] if pre else [TokenKind.COMMA, TokenKind.SEMICOLON]
            raise self.fail(expected)
        branches = []
        while self.accept(TokenKind.SEMICOLON):
            branches.append(self.branch())
        self.expect_close([TokenKind.SEMICOLON])
        return Split(splitter, tuple(branches), pre)

    # <branch> ::= <comp> (, <comp>)* (. <num>)? | pass
    def branch(self):
        if self.accept(TokenKind.KW_PASS):
            return PassBranch()
        if not self.at(*_COMP_START):
            raise self.fail(list(_COMP_START) + [TokenKind.KW_PASS])
        body = self.comp_list()
        replications = 1
        if self.accept(TokenKind.DOT):
            token = self.expect(TokenKind.NUMBER)
            replications = int(token.text)
            if replications > REPLICATIONS_MAX:
                raise ParseError(f"replications {replications} exceed {REPLICATIONS_MAX}", token.span)
        if not self.at(TokenKind.SEMICOLON, TokenKind.RBRACE):
            alternatives = [TokenKind.COMMA, TokenKind.SEMICOLON, TokenKind.RBRACE]
            if replications == 1:
                alternatives.append(TokenKind.DOT)
            raise self.fail(alternatives)
        return NormalBranch(body, replications)

    def link(self) -> LinkRef:
        self.expect(TokenKind.IDENT)
        self.expect(TokenKind.LPAREN)
        target = self.component_id()
        self.expect(TokenKind.RPAREN)
        return LinkRef(target)

    def component_id(self) -> str:
        parts = [self.id_segment()]
        while self.at(TokenKind.DOT):
            self.pos += 1
            parts.append(self.id_segment())
        return ".".join(parts)

    def id_segment(self) -> str:
        if not self.at(*_ID_SEGMENT):
            raise self.fail([TokenKind.IDENT])
        token = self.current
        self.pos += 1
        return token.text


def parse(source: str) -> ServiceSpec:
    """
    Parse service text into a ServiceSpec

    Args:
        source: Text such as `service { BNG , NAT }`

    Returns:
        The AST; top-level comma lists become ServiceSpec.compositions

    Raises:
        ParseError: on the first lexical or syntax error
    """
    return _Parser(tokenize(source)).start()


# ============================================================================
# Renderer
# ============================================================================

def _render_list(items: Seq[Composition]) -> str:
    parts: List[str] = []
    for item in items:
        # Sequence has no syntax of its own; its items join the surrounding list
        if isinstance(item, Sequence):
            parts.append(_render_list(item.items))
        else:
            parts.append(_render_comp(item))
    return " , ".join(parts)


def _render_comp(comp: Composition) -> str:
    if isinstance(comp, Single):
        return comp.function
    if isinstance(comp, BestBinding):
        return f"best-binding {{ {' , '.join(comp.functions)} }}"
    if isinstance(comp, AllBindings):
        return f"all-bindings {{ {' , '.join(comp.functions)} }}"
    if isinstance(comp, LinkRef):
        return f"{LINK_WORD}({comp.target})"
    if isinstance(comp, Sequence):
        return _render_list(comp.items)
    if isinstance(comp, Split):
        head = comp.splitter
        if comp.pre:
            head += f" , best-binding {{ {' , '.join(comp.pre)} }}"
        branches = []
        for branch in comp.branches:
            if isinstance(branch, PassBranch):
                branches.append("pass")
            else:
                text = _render_list(branch.body)
                if branch.replications > 1:
                    text += f".{branch.replications}"
                branches.append(text)
        return f"split {{ {' ; '.join([head] + branches)} }}"
    raise TypeError(f"cannot render {type(comp).__name__}")


def render(spec: ServiceSpec) -> str:
    """
    Canonical text of a spec

    Single spaces around commas and semicolons, space-padded braces,
    `.N` only for replications above 1; definitions follow on their own lines.

    Args:
        spec: Valid spec

    Returns:
        Text without a trailing newline
    """
    lines = [f"service {{ {_render_list(spec.compositions)} }}"]
    for definition in spec.definitions:
        lines.append(f"{COMPONENT_WORD} {definition.name} {{ {_render_list(definition.compositions)} }}")
    return "\n".join(lines)


def dump_ast(spec: ServiceSpec) -> str:
    """Indented structural dump used by `chainc parse --ast`"""
    lines = [f"ServiceSpec(direction={spec.direction})"]

    def walk(comp, depth: int) -> None:
        pad = "  " * depth
        if isinstance(comp, Single):
            lines.append(f"{pad}Single {comp.function}")
        elif isinstance(comp, BestBinding):
            lines.append(f"{pad}BestBinding {list(comp.functions)}")
        elif isinstance(comp, AllBindings):
            lines.append(f"{pad}AllBindings {list(comp.functions)}")
        elif isinstance(comp, LinkRef):
            lines.append(f"{pad}LinkRef {comp.target}")
        elif isinstance(comp, Sequence):
            lines.append(f"{pad}Sequence")
            for item in comp.items:
                walk(item, depth + 1)
        elif isinstance(comp, Split):
            lines.append(f"{pad}Split splitter={comp.splitter} pre={list(comp.pre)}")
            for branch in comp.branches:
                if isinstance(branch, PassBranch):
                    lines.append(f"{pad}  Pass")
                else:
                    lines.append(f"{pad}  Normal replications={branch.replications}")
                    for item in branch.body:
                        walk(item, depth + 2)

    for comp in spec.compositions:
        walk(comp, 1)
    for definition in spec.definitions:
        lines.append(f"Definition {definition.name}")
        for comp in definition.compositions:
            walk(comp, 1)
    return "\n".join(lines)
