"""Recursive-descent parser for Loy.

Precedence, tightest first: ``not``, ``and``, ``or``, ``implies``
(right associative).  Quantifier bodies extend as far right as possible.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from loy.errors import ParseError
from loy.frontend import ast as A
from loy.frontend.lexer import Token, tokenize

CLAUSE_KEYWORDS = ("requires", "ensures", "modifies")


class Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.pos = 0

    # ------------------------------------------------------------- plumbing

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, msg: str, tok: Token = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col, tok.text or "end of input")

    def expect(self, kind: str, text: str = None) -> Token:
        if not self.tok.is_(kind, text):
            what = repr(text) if text else kind
            raise self.error(f"expected {what}")
        return self.advance()

    def accept(self, kind: str, text: str = None) -> Optional[Token]:
        if self.tok.is_(kind, text):
            return self.advance()
        return None

    def loc(self, tok: Token = None) -> A.Loc:
        tok = tok or self.tok
        return A.Loc(tok.line, tok.col)

    # -------------------------------------------------------------- structure

    def spec(self) -> A.LoySpec:
        classes = []
        while self.tok.kind != "eof":
            classes.append(self.class_spec())
        return A.LoySpec(tuple(classes))

    def class_spec(self) -> A.ClassSpec:
        start = self.expect("kw", "class")
        name = self.expect("ident").text
        sup = None
        if self.accept("kw", "ext"):
            sup = self.expect("ident").text
        self.expect("punct", "{")
        decls: List[A.FieldDecl] = []
        deps: List[A.DependsClause] = []
        invs: List[A.Clause] = []
        methods: List[A.MethodSpec] = []
        while not self.tok.is_("punct", "}"):
            t = self.tok
            if self.accept("punct", ";"):
                continue
            if t.is_("kw", "depends"):
                deps.append(self.depends())
            elif t.is_("kw", "invariant"):
                self.advance()
                invs.append(A.Clause(self.formula(), self.loc(t)))
            elif t.kind == "ident" and self.peek().is_("punct", ":"):
                decls.append(self.decl())
            elif t.kind == "ident" and (self.peek().is_("punct", "(") or
                                        (self.peek().kind == "ident" and
                                         self.peek(2).is_("punct", "("))):
                methods.append(self.method())
            else:
                raise self.error("expected field, depends, invariant or method")
        self.expect("punct", "}")
        return A.ClassSpec(name, sup, tuple(decls), tuple(deps), tuple(invs),
                           tuple(methods), self.loc(start))

    def decl(self) -> A.FieldDecl:
        t = self.expect("ident")
        self.expect("punct", ":")
        mult = A.SET if self.accept("kw", "set") else A.SCALAR
        target = self.expect("ident").text
        return A.FieldDecl(t.text, target, mult, self.loc(t))

    def _list_continues(self, prev: Token) -> bool:
        # items are comma separated or whitespace separated on one line
        if self.accept("punct", ","):
            return True
        return self.tok.kind == "ident" and self.tok.line == prev.line

    def depends(self) -> A.DependsClause:
        start = self.expect("kw", "depends")
        dep = self.expect("ident").text
        self.expect("punct", "<-")
        last = self.expect("ident")
        sources = [last.text]
        while self._list_continues(last):
            last = self.expect("ident")
            sources.append(last.text)
        return A.DependsClause(dep, tuple(sources), self.loc(start))

    def method(self) -> A.MethodSpec:
        start = self.tok
        ret = None
        if self.peek().kind == "ident":
            ret = self.advance().text
        name = self.expect("ident").text
        self.expect("punct", "(")
        params: List[A.FieldDecl] = []
        if not self.tok.is_("punct", ")"):
            params.append(self.decl())
            while self.accept("punct", ","):
                params.append(self.decl())
        self.expect("punct", ")")
        pre: List[A.Clause] = []
        post: List[A.Clause] = []
        mods: List[A.Path] = []
        while True:
            t = self.tok
            if self.accept("punct", ";"):
                continue
            if self.accept("kw", "requires"):
                pre.append(A.Clause(self.formula(), self.loc(t)))
            elif self.accept("kw", "ensures"):
                post.append(A.Clause(self.formula(), self.loc(t)))
            elif self.accept("kw", "modifies"):
                mods.extend(self.paths(t))
            else:
                break
        return A.MethodSpec(name, tuple(params), tuple(pre), tuple(post),
                            tuple(mods), ret, self.loc(start))

    def paths(self, kw: Token) -> List[A.Path]:
        out = []
        prev = kw
        while True:
            first = self.expect("ident")
            names = [first.text]
            while self.accept("punct", "."):
                names.append(self.expect("ident").text)
            out.append(A.Path(tuple(names), self.loc(first)))
            prev = self.toks[self.pos - 1]
            if not self._list_continues(prev):
                return out

    # --------------------------------------------------------------- formulas

    def formula(self) -> A.Formula:
        left = self.disjunction()
        if self.accept("kw", "implies"):
            return A.Implies(left, self.formula())
        return left

    def disjunction(self) -> A.Formula:
        left = self.conjunction()
        while self.accept("kw", "or"):
            left = A.Or(left, self.conjunction())
        return left

    def conjunction(self) -> A.Formula:
        left = self.unary()
        while self.accept("kw", "and"):
            left = A.And(left, self.unary())
        return left

    def unary(self) -> A.Formula:
        t = self.tok
        if self.accept("kw", "not"):
            return A.Not(self.unary())
        if t.is_("kw", "all") or t.is_("kw", "exists"):
            self.advance()
            var = self.expect("ident").text
            self.expect("punct", ":")
            cls = self.expect("ident").text
            self.expect("punct", "|")
            body = self.formula()
            node = A.All if t.text == "all" else A.Exists
            return node(var, cls, body, self.loc(t))
        if self.accept("kw", "no"):
            return A.NoExpr(self.expr())
        if self.accept("kw", "some"):
            return A.SomeExpr(self.expr())
        if self.accept("punct", "("):
            f = self.formula()
            self.expect("punct", ")")
            return f
        if t.kind == "ident":
            left = self.expr()
            eq = self.expect("punct", "=")
            return A.Equal(left, self.expr(), self.loc(eq))
        raise self.error("expected formula")

    def expr(self) -> A.Expr:
        t = self.expect("ident")
        e: A.Expr = A.Name(t.text, bool(self.accept("punct", "'")), self.loc(t))
        while self.accept("punct", "."):
            f = self.expect("ident")
            primed = bool(self.accept("punct", "'"))
            e = A.FieldAccess(e, f.text, primed, self.loc(f))
        return e


def parse(source: str) -> A.LoySpec:
    """Parse Loy source text into a specification."""
    return Parser(source).spec()


def parse_files(paths: Sequence[str]) -> A.LoySpec:
    spec = A.LoySpec()
    for p in paths:
        with open(p, encoding="utf-8") as fh:
            spec = spec + parse(fh.read())
    return spec


def parse_formula(source: str) -> A.Formula:
    p = Parser(source)
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error("unexpected input after formula")
    return f
