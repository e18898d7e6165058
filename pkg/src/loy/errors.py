"""Exception types shared across the analyzer."""

from __future__ import annotations


class LoyError(Exception):
    """A user-facing error in a Loy source or request."""


class LexError(LoyError):
    def __init__(self, msg: str, line: int, col: int, token: str = ""):
        super().__init__(f"{line}:{col}: {msg}" + (f" near {token!r}" if token else ""))
        self.line = line
        self.col = col
        self.token = token


class ParseError(LexError):
    pass


class ResolveError(LoyError):
    pass


class InternalFault(Exception):
    """An encoder or engine bug: unbound variable, arity mismatch, ..."""


class BudgetExceeded(Exception):
    """The solver gave up after exhausting its search-node budget."""

    def __init__(self, nodes: int):
        super().__init__(f"search budget of {nodes} nodes exhausted")
        self.nodes = nodes
