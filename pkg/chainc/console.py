"""
Terminal output helpers
Progress and status messages go to stderr so stdout stays clean for
rendered specs, documents, DOT text and statistics lines
"""

import os
import sys
from typing import Iterable, TextIO

from chainc.config import NO_COLOR_ENV_VAR


class Colors:
    """终端颜色"""
    RED = '\033[0;31m'
    GREEN = '\033[0;32m'
    YELLOW = '\033[1;33m'
    BLUE = '\033[0;34m'
    NC = '\033[0m'  # No Color


_quiet = False


def set_quiet(quiet: bool) -> None:
    """Silence info and success messages (warnings and errors still print)"""
    global _quiet
    _quiet = quiet


def _stream() -> TextIO:
    return sys.stderr


def _paint(color: str, tag: str) -> str:
    stream = _stream()
    if os.environ.get(NO_COLOR_ENV_VAR) or not getattr(stream, "isatty", lambda: False)():
        return f"[{tag}]"
    return f"{color}[{tag}]{Colors.NC}"


def print_info(msg: str):
    """打印信息"""
    if not _quiet:
        print(f"{_paint(Colors.BLUE, 'INFO')} {msg}", file=_stream())


def print_success(msg: str):
    """打印成功消息"""
    if not _quiet:
        print(f"{_paint(Colors.GREEN, 'SUCCESS')} {msg}", file=_stream())


def print_warning(msg: str):
    """打印警告消息"""
    print(f"{_paint(Colors.YELLOW, 'WARNING')} {msg}", file=_stream())


def print_error(msg: str):
    """打印错误消息"""
    print(f"{_paint(Colors.RED, 'ERROR')} {msg}", file=_stream())


def print_step(msg: str):
    """打印步骤标题"""
    if _quiet:
        return
    stream = _stream()
    print("", file=stream)
    print("=" * 60, file=stream)
    print(msg, file=stream)
    print("=" * 60, file=stream)


def print_diagnostics(diagnostics: Iterable) -> None:
    """
    Print diagnostics one per line as `CODE: message @ path`

    Args:
        diagnostics: Diagnostic objects (see chainc.errors)
    """
    stream = _stream()
    for diagnostic in diagnostics:
        print(diagnostic.format(), file=stream)
