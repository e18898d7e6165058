"""Loy lexer, parser, resolver and type checker."""

from typing import Sequence

from loy.errors import LoyError
from loy.frontend.ast import LoySpec
from loy.frontend.parser import parse, parse_files, parse_formula
from loy.frontend.pretty import spec as prettyprint
from loy.frontend.resolve import ResolvedSpec, resolve
from loy.frontend.typecheck import Diagnostic, typecheck


class SpecDiagnostics(LoyError):
    def __init__(self, diags: Sequence[Diagnostic]):
        super().__init__("\n".join(str(d) for d in diags))
        self.diagnostics = list(diags)


def load(source: str) -> ResolvedSpec:
    """Parse, resolve and type check; raises on any diagnostic."""
    rs = resolve(parse(source))
    diags = typecheck(rs)
    if diags:
        raise SpecDiagnostics(diags)
    return rs


__all__ = [
    "Diagnostic", "LoySpec", "ResolvedSpec", "SpecDiagnostics", "load",
    "parse", "parse_files", "parse_formula", "prettyprint", "resolve",
    "typecheck",
]
