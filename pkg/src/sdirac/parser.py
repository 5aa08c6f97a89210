"""Recursive-descent parser for Weyl-algebra expressions.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' nat)?
    atom   := nat | 'i' | 'lambda' | var | 'd_' var | '(' expr ')' | '-' factor

``*`` is noncommutative composition, left to right.  The right operand of ``/``
must lower to a nonzero scalar, so ``i/2*y`` and ``(lambda + 1)/(lambda - 2)``
both read back what the printer writes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .scalar import I, LAMBDA, Scalar
from .weyl import PolyElement, VarSpace, WeylElement


class ParseError(ValueError):
    def __init__(self, message, pos=None, src=None):
        self.pos = pos
        self.message = message
        text = message if pos is None else f"{message} at position {pos}"
        if src is not None and pos is not None:
            text += f"\n  {src}\n  {' ' * pos}^"
        super().__init__(text)


# --- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    pos: int


@dataclass(frozen=True)
class Imag:
    pos: int


@dataclass(frozen=True)
class Lam:
    pos: int


@dataclass(frozen=True)
class Var:
    name: str
    pos: int


@dataclass(frozen=True)
class Der:
    name: str
    pos: int


@dataclass(frozen=True)
class Neg:
    arg: object
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: object
    right: object
    pos: int


@dataclass(frozen=True)
class Power:
    base: object
    exp: int
    pos: int


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<der>d_[A-Za-z][A-Za-z0-9]*)|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
                    r"|(?P<op>[-+*/^()]))")


def tokenize(src: str):
    out = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos == len(src):
            break
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos, src)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src, space):
        self.src = src
        self.space = space
        self.toks = tokenize(src)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def fail(self, msg, pos=None):
        raise ParseError(msg, self.peek()[2] if pos is None else pos, self.src)

    def expect(self, value):
        kind, v, pos = self.peek()
        if kind != "op" or v != value:
            self.fail(f"expected {value!r}, found {v or 'end of input'!r}")
        return self.take()

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            _, op, pos = self.take()
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take()
            node = BinOp(op, node, self.factor(), pos)
        return node

    def factor(self):
        node = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            _, _, pos = self.take()
            kind, v, npos = self.peek()
            if kind != "num":
                self.fail("exponent must be a nonnegative integer")
            self.take()
            node = Power(node, int(v), pos)
        return node

    def atom(self):
        kind, v, pos = self.peek()
        if kind == "num":
            self.take()
            return Num(int(v), pos)
        if kind == "der":
            name = v[2:]
            if name not in self.space:
                self.fail(f"unknown variable {name!r} (declared: {','.join(self.space)})")
            self.take()
            return Der(name, pos)
        if kind == "name":
            self.take()
            if v == "i":
                return Imag(pos)
            if v == "lambda":
                return Lam(pos)
            if v not in self.space:
                self.fail(f"unknown variable {v!r} (declared: {','.join(self.space)})", pos)
            return Var(v, pos)
        if kind == "op" and v == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "op" and v == "-":
            self.take()
            return Neg(self.factor(), pos)
        self.fail(f"unexpected {v!r}" if v else "unexpected end of input")


def parse_expr(src: str, vars="x,y,q"):
    """Parse ``src`` into an AST over the declared variables."""
    space = VarSpace(vars)
    p = _Parser(src, space)
    node = p.expr()
    if p.peek()[0] != "end":
        p.fail(f"unexpected {p.peek()[1]!r}")
    return node


def lower(node, space) -> WeylElement:
    """Evaluate an AST in the Weyl algebra over ``space``."""
    space = VarSpace(space)
    if isinstance(node, Num):
        return WeylElement.const(space, Scalar(node.value))
    if isinstance(node, Imag):
        return WeylElement.const(space, I)
    if isinstance(node, Lam):
        return WeylElement.const(space, LAMBDA)
    if isinstance(node, Var):
        return WeylElement.var(space, node.name)
    if isinstance(node, Der):
        return WeylElement.der(space, node.name)
    if isinstance(node, Neg):
        return -lower(node.arg, space)
    if isinstance(node, Power):
        return lower(node.base, space) ** node.exp
    a, b = lower(node.left, space), lower(node.right, space)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if not b.is_scalar():
        raise ParseError("divisor must be a scalar", node.pos)
    d = b.scalar_value()
    if d.is_zero():
        raise ParseError("division by zero", node.pos)
    return a / d


def parse_weyl(src: str, vars="x,y,q") -> WeylElement:
    return lower(parse_expr(src, vars), vars)


def parse_poly(src: str, vars="x,y,q") -> PolyElement:
    w = parse_weyl(src, vars)
    if w.has_derivatives():
        raise ParseError("polynomial operand must not contain derivatives")
    return PolyElement.from_weyl(w)
