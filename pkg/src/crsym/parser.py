"""Expressions for defining functions: tokenizer, parser, renderer, expansion.

Grammar (lowest to highest precedence)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" INTEGER)?
    atom   := INTEGER | NAME | NAME "(" expr ")" | "(" expr ")"

``p/q`` between two integer literals is read as one rational literal.  The
divisor of any other ``/`` must expand to a constant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import GaussRat
from .series import PRIMITIVES, SeriesError, TruncSeries, VarSet, primitive

__all__ = [
    "ParseError",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Pow",
    "Call",
    "parse_expr",
    "render",
    "expand",
    "variable_aliases",
]


class ParseError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} at position {pos}")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            out.append(("op", ch, m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ParseError(f"expected {op!r}", t[2])

    def parse(self):
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected token {t[1]!r}", t[2])
        return e

    def expr(self):
        left = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            left = BinOp(op, left, self.term())
        return left

    def _literal_int(self, start: int) -> bool:
        """True if the tokens from ``start`` to here are one bare integer."""
        return self.i - start == 1 and self.toks[start][0] == "int"

    def term(self):
        start = self.i
        left = self.unary()
        bare = self._literal_int(start)
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            rstart = self.i
            right = self.unary()
            if op == "/" and bare and self._literal_int(rstart):
                if right.value == 0:
                    raise ParseError("division by zero", self.toks[rstart][2])
                left = Num(left.value / right.value)
            else:
                left = BinOp(op, left, right)
            bare = False
        return left

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            e = self.take()
            if e[0] == "op" and e[1] == "-":
                raise ParseError("exponents must be nonnegative integers", e[2])
            if e[0] != "int":
                raise ParseError("exponents must be integer literals", e[2])
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "^":
                raise ParseError("chained exponents need parentheses", nxt[2])
            return Pow(base, e[1])
        return base

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "int":
            return Num(Fraction(val))
        if kind == "name":
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "(":
                if val not in PRIMITIVES:
                    raise ParseError(f"unknown function {val!r}", pos)
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val in PRIMITIVES:
                raise ParseError(f"function {val!r} needs an argument", pos)
            return Var(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {val!r}", pos)


def parse_expr(text: str):
    return _Parser(text).parse()


# precedence levels: sum 1, product 2, unary 3, power 4, atom 5
def _prec(node) -> int:
    if isinstance(node, BinOp):
        return 1 if node.op in "+-" else 2
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    if isinstance(node, Num) and node.value.denominator != 1:
        return 2
    return 5


def _wrap(node, need: int) -> str:
    text = render(node)
    return f"({text})" if _prec(node) < need else text


def render(node) -> str:
    """Text that parses back to the same tree."""
    if isinstance(node, Num):
        v = node.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, 3)
    if isinstance(node, Pow):
        return f"{_wrap(node.base, 5)}^{node.exp}"
    if isinstance(node, Call):
        return f"{node.fn}({render(node.arg)})"
    if isinstance(node, BinOp):
        if node.op in "+-":
            return f"{_wrap(node.left, 1)} {node.op} {_wrap(node.right, 2)}"
        left = _wrap(node.left, 2)
        # an integer literal before "/" followed by an integer would fold into a rational
        if (
            node.op == "/"
            and isinstance(node.left, Num)
            and node.left.value.denominator == 1
            and isinstance(node.right, Num)
            and node.right.value.denominator == 1
        ):
            left = f"({left})"
        return f"{left}{node.op}{_wrap(node.right, 3 if not isinstance(node.right, Num) else 5)}"
    raise TypeError(f"not an expression node: {node!r}")


def variable_aliases(vars: VarSet) -> dict:
    """Accepted identifiers for each variable (``y`` for ``y1`` when m = 1, etc.)."""
    out = {n: n for n in vars.names}
    for short, long in (("y", "y1"), ("z", "z1"), ("zb", "zb1")):
        if long in vars.names and not any(n.startswith(short) and n != long and n[len(short):].isdigit() for n in vars.names):
            out[short] = long
    return out


def expand(node, vars: VarSet, N: int) -> TruncSeries:
    """Taylor expansion of the expression through total degree N."""
    aliases = variable_aliases(vars)

    def go(n):
        if isinstance(n, Num):
            return TruncSeries.const(vars, GaussRat(n.value), N)
        if isinstance(n, Var):
            if n.name in ("u", "x") or (n.name[:1] in "ux" and n.name[1:].isdigit()):
                raise ParseError(f"variable {n.name!r} is not allowed: defining functions may not depend on it")
            if n.name not in aliases:
                raise ParseError(f"unknown identifier {n.name!r}; expected one of {sorted(aliases)}")
            return TruncSeries.var(vars, aliases[n.name], N)
        if isinstance(n, Neg):
            return -go(n.arg)
        if isinstance(n, Pow):
            return go(n.base).pow(n.exp, N)
        if isinstance(n, Call):
            arg = go(n.arg)
            if arg.constant_term():
                raise ParseError(f"argument of {n.fn} must vanish at the origin: {render(n.arg)}")
            return primitive(n.fn, arg, order=N)
        if isinstance(n, BinOp):
            a, b = go(n.left), go(n.right)
            if n.op == "+":
                return a + b
            if n.op == "-":
                return a - b
            if n.op == "*":
                return a.mul(b, N)
            if any(sum(e) for e in b.terms):
                raise ParseError(f"division by a non-constant expression: {render(n.right)}")
            c = b.constant_term()
            if not c:
                raise ParseError(f"division by zero: {render(n.right)}")
            return a.scale(c.inverse())
        raise TypeError(f"not an expression node: {n!r}")

    try:
        return go(node).truncate(N)
    except SeriesError as exc:
        raise ParseError(str(exc)) from None
