"""Test helpers: fixture loading and random Loy source generation."""

import os
import random

from loy.encoder import encode_spec
from loy.frontend import load

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def fixture_text(name):
    with open(fixture_path(name), encoding="utf-8") as fh:
        return fh.read()


def encoded(name):
    return encode_spec(load(fixture_text(name)))


def random_spec(rng: random.Random, max_classes=2, max_fields=2, max_invs=2):
    """Source text of a small well-typed Loy spec with invariants.

    Class ``K1`` may extend ``K0``.  Invariants are boolean combinations
    of ``no``/``some`` over receiver chains of length one or two.
    """
    n = rng.randint(1, max_classes)
    names = [f"K{i}" for i in range(n)]
    sup = {}
    if n == 2 and rng.random() < 0.4:
        sup["K1"] = "K0"
    fields = {c: [] for c in names}
    for c in names:
        for j in range(rng.randint(0, max_fields)):
            fields[c].append((f"f{c[1:]}{j}", rng.choice(names)))
    visible = {c: fields[c] + (fields[sup[c]] if c in sup else []) for c in names}
    lines = []
    for c in names:
        head = f"class {c}" + (f" ext {sup[c]}" if c in sup else "") + " {"
        body = [f"  {f} : {t}" for f, t in fields[c]]
        for _ in range(rng.randint(0, max_invs)):
            if not visible[c]:
                break
            body.append("  invariant " + _random_formula(rng, visible, c, 2))
        lines.append("\n".join([head] + body + ["}"]))
    return "\n\n".join(lines) + "\n"


def _chain(rng, visible, c):
    f, t = rng.choice(visible[c])
    parts = [f]
    if visible[t] and rng.random() < 0.3:
        parts.append(rng.choice(visible[t])[0])
    return ".".join(parts)


def _random_formula(rng, visible, c, depth):
    r = rng.random()
    if depth == 0 or r < 0.5:
        return f"{rng.choice(['no', 'some'])} {_chain(rng, visible, c)}"
    a = _random_formula(rng, visible, c, depth - 1)
    b = _random_formula(rng, visible, c, depth - 1)
    if r < 0.65:
        return f"not ({a})"
    op = rng.choice(["and", "or", "implies"])
    return f"({a}) {op} ({b})"
