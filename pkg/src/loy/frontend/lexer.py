from __future__ import annotations

from dataclasses import dataclass
from typing import List

from loy.errors import LexError

KEYWORDS = {
    "class", "ext", "invariant", "depends", "requires", "ensures", "modifies",
    "and", "or", "implies", "not", "all", "exists", "no", "some", "set",
}

PUNCT = ("<-", "{", "}", "(", ")", ":", ",", ";", ".", "'", "=", "|")


@dataclass(frozen=True)
class Token:
    kind: str   # "ident", "kw", "punct", "eof"
    text: str
    line: int
    col: int

    def is_(self, kind: str, text: str = None) -> bool:
        return self.kind == kind and (text is None or self.text == text)


def tokenize(source: str) -> List[Token]:
    toks: List[Token] = []
    i = 0
    line, col = 1, 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            toks.append(Token("kw" if word in KEYWORDS else "ident", word, line, col))
            col += j - i
            i = j
            continue
        for p in PUNCT:
            if source.startswith(p, i):
                toks.append(Token("punct", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise LexError("unexpected character", line, col, ch)
    toks.append(Token("eof", "", line, col))
    return toks
