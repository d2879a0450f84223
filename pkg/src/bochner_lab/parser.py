"""Expression grammar for coefficients and command-line input.

::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | base ('^' uint)?
    base   := rational | ident | '(' expr ')'

A rational literal is ``123`` or ``3/2`` (no spaces around the slash).
There is no division operator; rational functions are written as a pair of
polynomials, textually ``(num)/(den)``, and read with :func:`parse_ratfn`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple, Union

from .exactnum import MPoly, RatFn, ratfn_reduce


class ParseError(ValueError):
    """Malformed expression; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariable(ParseError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown variable {name!r}", position)
        self.name = name


# -- AST ------------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Var, Neg, BinOp, Pow]


# -- tokenizer ------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^()])
""", re.VERBOSE)


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, allowed: Optional[frozenset]):
        self.toks = _tokenize(text)
        self.i = 0
        self.allowed = allowed

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value or kind == "end":
            raise ParseError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[1] == "*":
            self.take()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.factor())
        node = self.base()
        if self.peek()[1] == "^":
            self.take()
            kind, text, pos = self.take()
            if kind != "num" or "/" in text:
                raise ParseError("exponent must be a nonnegative integer", pos)
            node = Pow(node, int(text))
        return node

    def base(self) -> Expr:
        kind, text, pos = self.take()
        if kind == "num":
            p, _, q = text.partition("/")
            if q and int(q) == 0:
                raise ParseError("zero denominator in literal", pos)
            return Num(Fraction(int(p), int(q or 1)))
        if kind == "ident":
            if self.allowed is not None and text not in self.allowed:
                raise UnknownVariable(text, pos)
            return Var(text)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)


def parse(text: str, allowed: Optional[Iterable[str]] = None) -> Expr:
    """Parse ``text``; identifiers outside ``allowed`` raise UnknownVariable.

    ``allowed=None`` accepts any identifier.
    """
    p = _Parser(text, None if allowed is None else frozenset(allowed))
    node = p.expr()
    kind, tok, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {tok!r}", pos)
    return node


def variables(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Num):
        return set()
    if isinstance(e, Neg):
        return variables(e.operand)
    if isinstance(e, Pow):
        return variables(e.base)
    return variables(e.left) | variables(e.right)


def to_poly(e: Expr) -> MPoly:
    if isinstance(e, Num):
        return MPoly.const(e.value)
    if isinstance(e, Var):
        return MPoly.var(e.name)
    if isinstance(e, Neg):
        return -to_poly(e.operand)
    if isinstance(e, Pow):
        return to_poly(e.base) ** e.exponent
    a, b = to_poly(e.left), to_poly(e.right)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    return a * b


def to_xpoly(e: Expr):
    """Evaluate as a polynomial in ``x`` with coefficients in the other names."""
    from .diffop import XPoly
    return XPoly.from_mpoly(to_poly(e))


def parse_poly(text: str, allowed: Optional[Iterable[str]] = None) -> MPoly:
    return to_poly(parse(text, allowed))


def parse_ratfn(text: str, allowed: Optional[Iterable[str]] = None) -> RatFn:
    """Read ``expr`` or ``(num)/(den)``."""
    s = text.strip()
    split = _top_level_slash(s)
    if split is None:
        return RatFn.coerce(parse_poly(s, allowed))
    num, den = s[:split], s[split + 1:]
    off = len(text) - len(text.lstrip())
    try:
        d = parse_poly(den, allowed)
    except ParseError as exc:
        raise type(exc)(*_reposition(exc, off + split + 1)) from None
    if d.is_zero():
        raise ParseError("zero denominator", off + split + 1)
    return ratfn_reduce(parse_poly(num, allowed), d)


def _reposition(exc: ParseError, shift: int):
    if isinstance(exc, UnknownVariable):
        return exc.name, exc.position + shift
    return str(exc).rsplit(" at position", 1)[0], exc.position + shift


def _top_level_slash(s: str) -> Optional[int]:
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0 and i > 0 and s[i - 1] == ")":
            return i
    return None
