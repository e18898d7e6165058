"""Patterns of analysis over relational satisfiability queries."""

from loy.patterns.core import (
    Diagnosis, check_core_first, diagnose_formula, diagnose_method, localize_invariants,
    problem_for,
)
from loy.patterns.engine import Engine, apply_pattern
from loy.patterns.tree import DiagnosisNode, WarningKind, render_text, to_json

__all__ = [
    "Diagnosis", "DiagnosisNode", "Engine", "WarningKind", "apply_pattern",
    "check_core_first", "diagnose_formula", "diagnose_method", "localize_invariants",
    "problem_for", "render_text", "to_json",
]
