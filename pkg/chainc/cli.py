#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# chainc 命令行入口
# parse / validate / convert / expand / dot / catalog
#
# 用法：
#   python -m chainc parse samples/bng-nat.sfc
#   python -m chainc expand samples/bb.sfc --mode enumerate --count-only
#   python -m chainc catalog --store ./store add bng-nat samples/bng-nat.sfc
#

import argparse
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional

from chainc import errors as E
from chainc.catalog import (
    CatalogStore,
    catalog_add,
    catalog_get,
    catalog_list,
    catalog_tag,
    resolve_links,
)
from chainc.config import (
    CATALOG_ENV_VAR,
    COST_MODELS,
    DEFAULT_CAP,
    EXIT_CAP_EXCEEDED,
    EXIT_DIAGNOSTICS,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    EXPANSION_MODES,
    FORMAT_BY_EXTENSION,
    FORMATS,
    FUNCTION_KINDS,
)
from chainc.console import (
    print_diagnostics,
    print_error,
    print_info,
    print_success,
    print_warning,
    set_quiet,
)
from chainc.costs import get_cost_model, parse_preference
from chainc.errors import CapExceededError, ChaincError, Diagnostic
from chainc.expansion import ExpansionPolicy, count_expansions, expand
from chainc.grammar import dump_ast, parse, render
from chainc.graph_emit import graph_stats, to_dot
from chainc.model import ComponentModel, LinkRef, ServiceSpec
from chainc.normalize import inline, normalize
from chainc.validate import check_references, validate_spec
from chainc.yang_io import InstanceDocument, read_instance, to_instance


class UsageError(Exception):
    """Bad combination of arguments (exit code 2)"""


@dataclass
class Loaded:
    """An input file after parsing or deserialization"""

    format: str
    spec: Optional[ServiceSpec] = None
    model: Optional[ComponentModel] = None
    warnings: List[Diagnostic] = field(default_factory=list)

    def to_model(self) -> ComponentModel:
        if self.model is None:
            self.model = normalize(self.spec)
        return self.model

    def to_spec(self) -> ServiceSpec:
        if self.spec is None:
            self.spec = inline(self.model)
        return self.spec


# ============================================================================
# I/O helpers
# ============================================================================

def input_format(path: str, override: Optional[str]) -> str:
    if override:
        return override
    if path == "-":
        raise UsageError("reading from standard input requires --format")
    suffix = Path(path).suffix.lower()
    if suffix not in FORMAT_BY_EXTENSION:
        raise UsageError(f"cannot tell the format of {path}; pass --format {'|'.join(FORMATS)}")
    return FORMAT_BY_EXTENSION[suffix]


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(path).write_text(text, encoding="utf-8")


def load(path: str, fmt: Optional[str] = None, lax: bool = False) -> Loaded:
    """
    Read a DSL or instance-document input

    Args:
        path: File path or "-" for standard input
        fmt: Format override (dsl|json|xml)
        lax: Tolerate unknown keys in instance documents

    Returns:
        Loaded input (spec for DSL, model for documents)
    """
    fmt = input_format(path, fmt)
    text = read_text(path)
    if fmt == "dsl":
        return Loaded(fmt, spec=parse(text))
    model, warnings = read_instance(InstanceDocument(fmt, text), lax=lax)
    return Loaded(fmt, model=model, warnings=warnings)


def require_valid_spec(loaded: Loaded) -> None:
    if loaded.spec is not None and loaded.model is None:
        diagnostics = validate_spec(loaded.spec)
        loaded.warnings.extend(d for d in diagnostics if not d.is_error)
        if E.has_errors(diagnostics):
            raise ChaincError(E.E_INVALID_SPEC, "spec has errors", E.errors_only(diagnostics))


def open_store(args) -> CatalogStore:
    if not args.store:
        raise UsageError(f"no catalog store: pass --store or set {CATALOG_ENV_VAR}")
    return CatalogStore(args.store)


def has_external_links(model: ComponentModel) -> bool:
    ids = {component.id for component in model.components}
    return any(
        isinstance(entry.body, LinkRef) and entry.body.target not in ids
        for component in model.components
        for entry in component.compositions
    )


def expansion_model(args, loaded: Loaded) -> ComponentModel:
    """Model ready for expansion, with catalog links resolved when a store is given"""
    require_valid_spec(loaded)
    model = loaded.to_model()
    if has_external_links(model) and args.store:
        model = resolve_links(model, open_store(args))
    return model


def direction_of(args, loaded: Loaded) -> str:
    if getattr(args, "symmetric", False):
        return "symmetric"
    return loaded.spec.direction if loaded.spec is not None else "forward"


def document_text(loaded: Loaded, to: str) -> str:
    if to == "dsl":
        return render(loaded.to_spec()) + "\n"
    return to_instance(loaded.to_model(), to).body


# ============================================================================
# Subcommands
# ============================================================================

def cmd_parse(args) -> int:
    text = read_text(args.input)
    spec = parse(text)
    if args.symmetric:
        spec = replace(spec, direction="symmetric")
    write_text(None, (dump_ast(spec) if args.ast else render(spec)) + "\n")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        loaded = load(args.input, args.format, args.lax)
    except ChaincError as e:
        if e.code == E.E_IO:
            raise
        print_diagnostics(e.as_diagnostics())
        return EXIT_DIAGNOSTICS

    diagnostics = list(loaded.warnings)
    if loaded.spec is not None:
        registry = open_store(args).load_registry() if args.store else None
        diagnostics.extend(validate_spec(loaded.spec, registry))
        if not E.has_errors(diagnostics):
            diagnostics.extend(E.errors_only(check_references(loaded.to_model(), allow_external=True)))
    print_diagnostics(diagnostics)
    if E.has_errors(diagnostics):
        print_error(f"{args.input}: {len(E.errors_only(diagnostics))} error(s)")
        return EXIT_DIAGNOSTICS
    print_success(f"{args.input}: valid")
    return EXIT_OK


def cmd_convert(args) -> int:
    loaded = load(args.input, args.format, args.lax)
    require_valid_spec(loaded)
    print_diagnostics(loaded.warnings)
    text = document_text(loaded, args.to)
    write_text(args.output, text)
    if args.output and args.output != "-":
        print_info(f"wrote {args.output}")
    return EXIT_OK


def make_policy(args) -> ExpansionPolicy:
    cost = None
    if args.mode == "select":
        cost = get_cost_model(args.cost or "edge-count", args.pref)
    elif args.cost or args.pref:
        print_warning(f"--cost/--pref only apply to --mode select, ignored for {args.mode}")
    return ExpansionPolicy(mode=args.mode, cap=args.cap, cost=cost)


def cmd_expand(args) -> int:
    if args.output and args.mode == "enumerate":
        raise UsageError("--mode enumerate writes one file per graph; use --out-dir")
    if args.output and args.out_dir:
        raise UsageError("-o and --out-dir are mutually exclusive")
    if args.cap < 1:
        raise UsageError("--cap must be at least 1")

    loaded = load(args.input, args.format, args.lax)
    model = expansion_model(args, loaded)
    print_diagnostics(loaded.warnings)

    if args.count_only:
        write_text(None, f"{count_expansions(model)}\n")
        return EXIT_OK

    graphs = expand(model, make_policy(args), direction=direction_of(args, loaded))
    print_diagnostics(graphs[0].warnings)
    endpoints = open_store(args).endpoints() if args.store else ()
    documents = [to_dot(graph, endpoints) for graph in graphs]

    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for index, text in enumerate(documents):
            (out_dir / f"g{index:04d}.dot").write_text(text, encoding="utf-8")
        print_info(f"wrote {len(documents)} graph(s) to {out_dir}")
    elif args.output:
        write_text(args.output, documents[0])

    stats_stream = sys.stderr if args.output == "-" else sys.stdout
    for graph in graphs:
        print(graph_stats(graph).format(), file=stats_stream)
    return EXIT_OK


def cmd_dot(args) -> int:
    loaded = load(args.input, args.format, args.lax)
    model = expansion_model(args, loaded)
    print_diagnostics(loaded.warnings)
    graph = expand(model, ExpansionPolicy("first"), direction=direction_of(args, loaded))[0]
    print_diagnostics(graph.warnings)
    endpoints = open_store(args).endpoints() if args.store else ()
    write_text(args.output, to_dot(graph, endpoints))
    return EXIT_OK


def cmd_catalog_add(args) -> int:
    store = open_store(args)
    loaded = load(args.input, args.format, args.lax)
    require_valid_spec(loaded)
    print_diagnostics(loaded.warnings)
    path = catalog_add(store, args.name, loaded.to_model())
    print_success(f"added {args.name} -> {path}")
    return EXIT_OK


def cmd_catalog_get(args) -> int:
    model = catalog_get(open_store(args), args.name)
    write_text(args.output, document_text(Loaded("json", model=model), args.to))
    return EXIT_OK


def cmd_catalog_list(args) -> int:
    rows = catalog_list(open_store(args))
    for row in rows:
        marker = f"! {row.error} {row.summary}" if row.error else row.summary
        print(f"{row.name}\t{marker}")
    if not rows:
        print_info("catalog is empty")
    return EXIT_DIAGNOSTICS if any(row.error for row in rows) else EXIT_OK


def cmd_catalog_resolve(args) -> int:
    loaded = load(args.input, args.format, args.lax)
    require_valid_spec(loaded)
    model = resolve_links(loaded.to_model(), open_store(args))
    write_text(args.output, document_text(Loaded("json", model=model), args.to))
    return EXIT_OK


def cmd_catalog_tag(args) -> int:
    catalog_tag(open_store(args), args.function, args.kind)
    print_success(f"{args.function} tagged as {args.kind}")
    return EXIT_OK


# ============================================================================
# Parser
# ============================================================================

def preference(text: str):
    try:
        return parse_preference(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _input_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=FORMATS, default=None,
                        help="input format (default: from the file extension; required for -)")
    parser.add_argument("--lax", action="store_true",
                        help="ignore unknown keys in instance documents")


def _store_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--store", default=os.environ.get(CATALOG_ENV_VAR),
                        help=f"catalog directory (default: ${CATALOG_ENV_VAR})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainc",
        description="Compiler for flexible service function chain specifications",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  chainc parse samples/bng-nat.sfc
  chainc validate spec.json
  chainc convert samples/split-http-filter.sfc --to json -o split.json
  chainc convert split.json --to dsl
  chainc expand samples/bb.sfc --mode enumerate --out-dir graphs/
  chainc expand samples/bb.sfc --mode select --cost adjacency-pref --pref BNG:NAT -o best.dot
  chainc dot samples/mobile.sfc -o mobile.dot
  chainc catalog --store ./catalog add bng-nat samples/bng-nat.sfc

Exit codes: 0 ok, 1 diagnostics with errors, 2 usage, 3 I/O, 4 cap exceeded
        """,
    )
    parser.add_argument("-q", "--quiet", action="store_true", help="only print warnings and errors")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("parse", help="parse service text and print its canonical form")
    p.add_argument("input", help="service text file or -")
    p.add_argument("--ast", action="store_true", help="print a structural dump instead")
    p.add_argument("--symmetric", action="store_true", help="mark the service as symmetric")
    p.set_defaults(handler=cmd_parse)

    p = sub.add_parser("validate", help="check a spec or instance document")
    p.add_argument("input", help="input file or -")
    _input_options(p)
    _store_option(p)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("convert", help="convert between dsl, json and xml")
    p.add_argument("input", help="input file or -")
    p.add_argument("--to", choices=FORMATS, required=True, help="output format")
    p.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    _input_options(p)
    p.set_defaults(handler=cmd_convert)

    p = sub.add_parser("expand", help="expand into forwarding graphs")
    p.add_argument("input", help="input file or -")
    p.add_argument("--mode", choices=EXPANSION_MODES, default="first", help="expansion mode (default: first)")
    p.add_argument("--cost", choices=COST_MODELS, default=None, help="cost model for select (default: edge-count)")
    p.add_argument("--pref", type=preference, action="append", default=[], metavar="BEFORE:AFTER",
                   help="adjacency preference, repeatable")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help=f"enumeration cap (default: {DEFAULT_CAP})")
    p.add_argument("--out-dir", default=None, help="write g0000.dot, g0001.dot, ... here")
    p.add_argument("-o", "--output", default=None, help="write the DOT of the single graph here")
    p.add_argument("--count-only", action="store_true", help="print the number of candidate graphs")
    p.add_argument("--symmetric", action="store_true", help="mark graphs as symmetric")
    _input_options(p)
    _store_option(p)
    p.set_defaults(handler=cmd_expand)

    p = sub.add_parser("dot", help="expand in first mode and print DOT")
    p.add_argument("input", help="input file or -")
    p.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    p.add_argument("--symmetric", action="store_true", help="mark the graph as symmetric")
    _input_options(p)
    _store_option(p)
    p.set_defaults(handler=cmd_dot)

    p = sub.add_parser("catalog", help="manage a catalog of pre-composed services")
    _store_option(p)
    catalog = p.add_subparsers(dest="catalog_command", metavar="action")
    catalog.required = True

    c = catalog.add_parser("add", help="store a spec under a name")
    c.add_argument("name")
    c.add_argument("input", help="input file or -")
    _input_options(c)
    c.set_defaults(handler=cmd_catalog_add)

    c = catalog.add_parser("get", help="print an entry")
    c.add_argument("name")
    c.add_argument("--to", choices=FORMATS, default="json")
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(handler=cmd_catalog_get)

    c = catalog.add_parser("list", help="list entries")
    c.set_defaults(handler=cmd_catalog_list)

    c = catalog.add_parser("resolve", help="import linked catalog entries into a model")
    c.add_argument("input", help="input file or -")
    c.add_argument("--to", choices=FORMATS, default="json")
    c.add_argument("-o", "--output", default=None)
    _input_options(c)
    c.set_defaults(handler=cmd_catalog_resolve)

    c = catalog.add_parser("tag", help="record a function as vnf or endpoint")
    c.add_argument("function")
    c.add_argument("--kind", choices=FUNCTION_KINDS, required=True)
    c.set_defaults(handler=cmd_catalog_tag)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one chainc command

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help and 2 for usage errors
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    set_quiet(args.quiet)

    try:
        return args.handler(args)
    except UsageError as e:
        print_error(str(e))
        return EXIT_USAGE
    except CapExceededError as e:
        print_diagnostics(e.as_diagnostics())
        return EXIT_CAP_EXCEEDED
    except ChaincError as e:
        print_diagnostics(e.as_diagnostics())
        return EXIT_IO if e.code == E.E_IO else EXIT_DIAGNOSTICS
    except OSError as e:
        print_error(str(e))
        return EXIT_IO
    except UnicodeDecodeError as e:
        print_error(f"input is not UTF-8: {e}")
        return EXIT_IO


def main():
    """主函数"""
    sys.exit(run())


if __name__ == "__main__":
    main()
