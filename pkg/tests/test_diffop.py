import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bochner_lab.catalog import FamilySpec, family_operator
from bochner_lab.diffop import (DiffOp, NotExactlySolvable, Resonance, WeylOp, XPoly, ad_x,
                                affine_transform, build_operator, eigen_sequence,
                                eigenpolynomial, operator_from_json, operator_to_json,
                                operator_from_terms)
from bochner_lab.exactnum import MPoly

X = sympy.Symbol("x")


def to_sympy(q: XPoly):
    return sum(sympy.Rational(c.numerator, c.denominator) * X ** m for m, c in enumerate(q.coeffs))


def sympy_apply(L: DiffOp, expr):
    return sympy.expand(sum(to_sympy(a) * sympy.diff(expr, X, i) for i, a in enumerate(L.coeffs, 1)))


def monic(expr):
    p = sympy.Poly(expr, X)
    return sympy.expand(expr / p.LC())


def test_hermite_matches_sympy():
    seq = eigen_sequence(family_operator(FamilySpec.make("hermite")), 12)
    for k in range(13):
        he = monic(sympy.hermite_prob(k, X)) if hasattr(sympy, "hermite_prob") else \
            monic(sympy.hermite(k, X / sympy.sqrt(2)))
        assert sympy.expand(to_sympy(seq[k]) - he) == 0


@pytest.mark.parametrize("alpha", [Fraction(1), Fraction(1, 2)])
def test_laguerre_matches_sympy(alpha):
    seq = eigen_sequence(family_operator(FamilySpec.make("laguerre", alpha=alpha)), 10)
    al = sympy.Rational(alpha.numerator, alpha.denominator)
    for k in range(11):
        assert sympy.expand(to_sympy(seq[k]) - monic(sympy.assoc_laguerre(k, al, X))) == 0


def test_jacobi_matches_sympy():
    seq = eigen_sequence(family_operator(FamilySpec.make("jacobi", alpha=1, beta=2)), 8)
    for k in range(1, 9):
        assert sympy.expand(to_sympy(seq[k]) - monic(sympy.jacobi(k, 1, 2, X))) == 0


coef = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 3))


@st.composite
def random_es_operator(draw):
    k = draw(st.integers(1, 4))
    coeffs = [XPoly(tuple(draw(st.lists(coef, min_size=i + 1, max_size=i + 1)))) for i in range(1, k + 1)]
    top = list(coeffs[-1].coeffs) + [Fraction(0)] * (k + 1 - len(coeffs[-1].coeffs))
    top[k] = draw(coef.filter(lambda c: c > 0))
    coeffs[-1] = XPoly(tuple(top))
    # generic first-order diagonal term keeps lambda injective on small n
    c1 = list(coeffs[0].coeffs) + [Fraction(0)] * 2
    c1[1] = Fraction(1, 7) + draw(st.integers(0, 3))
    coeffs[0] = XPoly(tuple(c1[:2]))
    return build_operator(coeffs, quiet=True)


@settings(max_examples=60, deadline=None)
@given(random_es_operator())
def test_eigenpolys_against_sympy_differentiation(L):
    try:
        seq = eigen_sequence(L, 7, check=False)
    except Resonance:
        return
    for k in range(8):
        P = to_sympy(seq[k])
        lam = L.lam(k)
        assert sympy.expand(sympy_apply(L, P) - sympy.Rational(lam.numerator, lam.denominator) * P) == 0
        assert seq[k].is_monic() and seq[k].degree == k


def test_lambda_polynomial():
    L = family_operator(FamilySpec.make("type1", k=3, a1=1, a2=2, a3=3))
    n = MPoly.var("n")
    # a_j x^(j-1) d^j lies below the diagonal, so only x d contributes
    assert L.lambda_poly == n
    A = family_operator(FamilySpec.make("cubicpoint", p=0, nu=2, mu=5))
    assert A.lambda_poly == 6 * n * (n - 1) * (n - 2) + 2 * n * (n - 1) + 5 * n
    assert A.lam(4) == 6 * 24 + 2 * 12 + 20


def test_not_exactly_solvable_warns_and_refuses():
    with pytest.warns(NotExactlySolvable):
        L = build_operator([XPoly.of(0, 0, 1)])  # x^2 d
    assert not L.exactly_solvable
    with pytest.raises(NotExactlySolvable):
        eigenpolynomial(L, 2)


def test_resonance_detected():
    # lambda(n) = n(n-1) - 2n takes the value -2 at n = 1 and n = 2
    L = build_operator([XPoly.of(1, -2), XPoly.of(0, 0, 1)])
    with pytest.raises(Resonance) as info:
        eigen_sequence(L, 4)
    assert (info.value.m, info.value.n) == (1, 2)
    with pytest.raises(Resonance):
        eigenpolynomial(L, 3)  # lambda(0) = lambda(3)


def test_symbolic_eigenpolynomial():
    L = operator_from_terms({(1, 1): 1, (2, 0): MPoly.var("a")}, quiet=True)
    P2 = eigenpolynomial(L, 2)
    # x d + a d^2: (x d + a d^2)(x^2 + a) = 2 (x^2 + a)
    assert P2[0] == MPoly.var("a") and P2[1] == 0 and P2[2] == 1


def test_json_round_trip(tmp_path):
    L = operator_from_terms({(1, 1): 1, (3, 2): MPoly.var("a3")}, quiet=True)
    spec = operator_to_json(L)
    assert spec["vars"] == ["a3"]
    back = operator_from_json(json.loads(json.dumps(spec)))
    assert back.coeffs == L.coeffs
    bound = operator_from_json(spec, {"a3": 2})
    assert bound.aij(3, 2) == 2


def test_ad_x_lowers_order():
    L = family_operator(FamilySpec.make("type1", k=3, a1=1, a2=2, a3=3))
    W = WeylOp.from_diffop(L)
    for _ in range(4):
        W = ad_x(W)
    assert W.is_zero()


def test_affine_transform_preserves_spectrum():
    L = family_operator(FamilySpec.make("laguerre", alpha=1))
    M = affine_transform(L, 2, 3)
    assert M.lambda_poly == L.lambda_poly
