#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Generates the reader differential corpus.

Each line of the output is one term followed by " .". Terms are random
trees of depth <= 5 over the default operator table, written in operator
notation with the parentheses the table requires (and some extra ones).
A handful of malformed sentences is appended so error agreement is
checked as well.

    python3 gen_reader_corpus.py --count 320 --seed 7 > corpus.pl
"""

import argparse
import random

INFIX = {
    ":-": (1200, "xfx"), "-->": (1200, "xfx"),
    ";": (1100, "xfy"), "->": (1050, "xfy"), "*->": (1050, "xfy"),
    ",": (1000, "xfy"),
    "=": (700, "xfx"), "\\=": (700, "xfx"), "==": (700, "xfx"), "\\==": (700, "xfx"),
    "@<": (700, "xfx"), "@>": (700, "xfx"), "@=<": (700, "xfx"), "@>=": (700, "xfx"),
    "=..": (700, "xfx"), "is": (700, "xfx"), "=:=": (700, "xfx"), "=\\=": (700, "xfx"),
    "<": (700, "xfx"), ">": (700, "xfx"), "=<": (700, "xfx"), ">=": (700, "xfx"),
    ":": (600, "xfy"),
    "+": (500, "yfx"), "-": (500, "yfx"), "/\\": (500, "yfx"), "\\/": (500, "yfx"),
    "*": (400, "yfx"), "/": (400, "yfx"), "//": (400, "yfx"), "rem": (400, "yfx"),
    "mod": (400, "yfx"), "div": (400, "yfx"), "<<": (400, "yfx"), ">>": (400, "yfx"),
    "xor": (400, "yfx"),
    "**": (200, "xfx"), "^": (200, "xfy"),
}
PREFIX = {
    ":-": (1200, "fx"), "?-": (1200, "fx"),
    "dynamic": (1150, "fx"), "discontiguous": (1150, "fx"),
    "\\+": (900, "fy"),
    "-": (200, "fy"), "+": (200, "fy"), "\\": (200, "fy"),
}
OPERATOR_ATOMS = set(INFIX) | set(PREFIX)

ATOMS = ["a", "b", "foo", "bar_1", "zZ", "[]", "{}", "'hello world'", "'A'", "'x-y'", "!", ";"]
OP_OPERANDS = ["-", "+", "=", "*", "mod", "is", "\\+"]
VARS = ["X", "Y", "Z", "_", "_G", "Acc"]
FLOATS = ["1.5", "0.25", "2.0", "3.75", "10.5"]
FUNCTORS = ["f", "g", "point", "'my functor'", "h"]


def left_max(prio, fixity):
    return prio if fixity in ("yfx", "fy") else prio - 1


def right_max(prio, fixity):
    return prio if fixity == "xfy" else prio - 1


class Gen:
    def __init__(self, rng):
        self.rng = rng

    def leaf(self):
        r = self.rng.random()
        if r < 0.35:
            return ("atom", self.rng.choice(ATOMS))
        if r < 0.6:
            return ("var", self.rng.choice(VARS))
        if r < 0.8:
            return ("int", self.rng.randint(-20, 999))
        if r < 0.9:
            f = self.rng.choice(FLOATS)
            return ("float", f if self.rng.random() < 0.7 else "-" + f)
        return ("atom", self.rng.choice(OP_OPERANDS))

    def term(self, depth):
        if depth <= 1 or self.rng.random() < 0.2:
            return self.leaf()
        r = self.rng.random()
        sub = lambda: self.term(depth - 1)
        if r < 0.45:
            name = self.rng.choice(sorted(INFIX))
            return ("infix", name, sub(), sub())
        if r < 0.6:
            name = self.rng.choice(sorted(PREFIX))
            return ("prefix", name, sub())
        if r < 0.8:
            n = self.rng.randint(1, 3)
            return ("compound", self.rng.choice(FUNCTORS), [sub() for _ in range(n)])
        if r < 0.93:
            n = self.rng.randint(0, 3)
            tail = sub() if n > 0 and self.rng.random() < 0.3 else None
            return ("list", [sub() for _ in range(n)], tail)
        return ("curly", sub())


CONTROL = {",", ";", "->", "*->", "\\+", ":-", "?-", "-->"}


def has_bare_control_var(t):
    """The reference reader rewrites variables that are direct arguments of
    control constructs (X becomes call(X)); such terms are skipped."""
    kind = t[0]
    if kind in ("infix", "prefix"):
        children = list(t[2:])
        if t[1] in CONTROL and any(c[0] == "var" for c in children):
            return True
        return any(has_bare_control_var(c) for c in children)
    if kind == "compound":
        return any(has_bare_control_var(c) for c in t[2])
    if kind == "list":
        return any(has_bare_control_var(c) for c in t[1]) or (
            t[2] is not None and has_bare_control_var(t[2]))
    if kind == "curly":
        return t[1][0] == "var" or has_bare_control_var(t[1])
    return False


def is_number(t):
    return t[0] in ("int", "float")


def render(t, max_prio, rng):
    """Returns (text, priority)."""
    kind = t[0]
    if kind == "atom":
        name = t[1]
        if name in OPERATOR_ATOMS:
            return "(" + name + ")", 0
        return name, 0
    if kind == "var":
        return t[1], 0
    if kind in ("int", "float"):
        return str(t[1]), 0
    if kind == "compound":
        args = ", ".join(render(a, 999, rng)[0] for a in t[2])
        return t[1] + "(" + args + ")", 0
    if kind == "list":
        items = ", ".join(render(a, 999, rng)[0] for a in t[1])
        if not t[1]:
            return "[]", 0
        tail = "" if t[2] is None else " | " + render(t[2], 999, rng)[0]
        return "[" + items + tail + "]", 0
    if kind == "curly":
        return "{" + render(t[1], 1200, rng)[0] + "}", 0
    if kind == "infix":
        prio, fixity = INFIX[t[1]]
        left, _ = render(t[2], left_max(prio, fixity), rng)
        right, _ = render(t[3], right_max(prio, fixity), rng)
        sep = "" if t[1] == "," else " "
        text = left + sep + t[1] + " " + right
        return wrap(text, prio, max_prio, rng)
    if kind == "prefix":
        prio, fixity = PREFIX[t[1]]
        arg_t = t[2]
        if is_number(arg_t) or (arg_t[0] == "atom" and arg_t[1] in OPERATOR_ATOMS):
            # Functional notation keeps these unambiguous.
            return t[1] + "(" + render(arg_t, 999, rng)[0] + ")", 0
        arg, _ = render(arg_t, left_max(prio, fixity), rng)
        return wrap(t[1] + " " + arg, prio, max_prio, rng)
    raise ValueError(kind)


def wrap(text, prio, max_prio, rng):
    if prio > max_prio or rng.random() < 0.05:
        return "(" + text + ")", 0
    return text, prio


MALFORMED = [
    "f(a :- b)",
    "X = \\+a",
    "2 ** 3 ** 4",
    "a = b = c",
    "foo bar",
    "f(a,)",
    "[a, b",
    "g(x))",
    "- = = a",
    "X = 1 + * 2",
    "[a|b|c]",
    "{a",
    "p :- :- q",
    "f(dynamic a)",
    "1 2",
    "X is",
    "(a",
    "a :- b :- c",
    "mod mod mod",
    "f(,)",
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=320)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--max-depth", type=int, default=5)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    gen = Gen(rng)
    seen = set()
    lines = []
    while len(lines) < args.count:
        term = gen.term(rng.randint(1, args.max_depth))
        if has_bare_control_var(term):
            continue
        text, _ = render(term, 1200, rng)
        if text in seen:
            continue
        seen.add(text)
        lines.append(text)
    lines.extend(MALFORMED)
    for line in lines:
        print(line + " .")


if __name__ == "__main__":
    main()
