from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bochner_lab.exactnum import MPoly, RatFn
from bochner_lab.parser import (BinOp, Neg, Num, ParseError, Pow, UnknownVariable, Var, parse,
                                parse_poly, parse_ratfn, to_poly, to_xpoly)
from conftest import mpolys

names = st.sampled_from(["n", "x", "a1", "a21", "nu"])
leaves = st.one_of(st.builds(Num, st.builds(Fraction, st.integers(0, 20), st.integers(1, 5))),
                   st.builds(Var, names))


def _trees(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(BinOp, st.sampled_from("+-*"), children, children),
        st.builds(Pow, children, st.integers(0, 3)),
    )


asts = st.recursive(leaves, _trees, max_leaves=8)


def render(e) -> str:
    if isinstance(e, Num):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"-({render(e.operand)})"
    if isinstance(e, Pow):
        return f"({render(e.base)})^{e.exponent}"
    return f"({render(e.left)}) {e.op} ({render(e.right)})"


@settings(max_examples=1000, deadline=None)
@given(mpolys(context=("n", "x", "a1", "a21")))
def test_printed_polynomial_round_trip(p):
    assert parse_poly(str(p)) == p


@settings(max_examples=1000, deadline=None)
@given(asts)
def test_rendered_ast_round_trip(e):
    assert to_poly(parse(render(e))) == to_poly(e)


@settings(max_examples=300, deadline=None)
@given(mpolys(context=("n", "a")), mpolys(context=("n", "a")))
def test_ratfn_round_trip(p, q):
    if q.is_zero():
        return
    r = RatFn(p, q)
    assert parse_ratfn(str(r)) == r


def test_precedence():
    assert parse_poly("2*x^2 - -x + 3/2") == 2 * MPoly.var("x") ** 2 + MPoly.var("x") + Fraction(3, 2)
    assert parse_poly("-x^2") == -(MPoly.var("x") ** 2)
    assert parse_poly("(1 - n)*(n + 1)") == 1 - MPoly.var("n") ** 2


def test_errors_carry_positions():
    with pytest.raises(ParseError) as info:
        parse("x + * 2")
    assert info.value.position == 4
    with pytest.raises(UnknownVariable) as info:
        parse("x + y", allowed={"x"})
    assert info.value.name == "y" and info.value.position == 4
    with pytest.raises(ParseError):
        parse("(x + 1")
    with pytest.raises(ParseError):
        parse("2x")  # no implicit multiplication
    with pytest.raises(ParseError):
        parse_ratfn("(x)/(0)")


def test_xpoly_view():
    q = to_xpoly(parse("a*x^2 + 3"))
    assert q.degree == 2
    assert q[2] == MPoly.var("a") and q[0] == 3
