from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bochner_lab.catalog import FamilySpec, catalog_pairs, family_operator
from bochner_lab.diffop import XPoly, eigen_sequence
from bochner_lab.exactnum import MPoly
from bochner_lab.recurrence import reconstruct_table, recurrence_table
from bochner_lab.shiftop import (Mismatch, NotMonic, ShiftOp, ad, ad_condition_check, ad_power,
                                 compose, delta_identities, duality_check, peel_powers, poly_of,
                                 shiftop_from_table)
from conftest import mpolys

n = MPoly.var("n")
npolys = mpolys(context=("n",), max_deg=2, max_terms=3)


@st.composite
def shiftops(draw):
    offs = draw(st.lists(st.integers(-3, 2), min_size=1, max_size=3, unique=True))
    return ShiftOp({j: draw(npolys) for j in offs})


def act(A: ShiftOp, seq, k):
    """``(A s)_k`` for a scalar sequence given as a function of the index."""
    return sum((c(k) * seq(k + j) for j, c in A.band), Fraction(0))


@settings(max_examples=1000, deadline=None)
@given(shiftops(), shiftops(), st.integers(0, 10))
def test_composition_is_action_composition(A, B, k):
    seq = lambda m: Fraction(m * m - 3 * m + 7, m + 11)
    inner = lambda m: act(B, seq, m)
    assert act(compose(A, B), seq, k) == act(A, inner, k)


@settings(max_examples=1000, deadline=None)
@given(shiftops(), shiftops(), shiftops())
def test_shift_algebra_axioms(A, B, C):
    assert compose(compose(A, B), C) == compose(A, compose(B, C))
    assert compose(A, B + C) == compose(A, B) + compose(A, C)
    # Jacobi identity for the commutator
    j = ad(A, ad(B, C)) + ad(B, ad(C, A)) + ad(C, ad(A, B))
    assert j.is_zero()


def test_composition_rule():
    f, g = ShiftOp({1: n}), ShiftOp({2: n ** 2})
    assert compose(f, g) == ShiftOp({3: n * (n + 1) ** 2})


def test_ad_first_power():
    Lam = ShiftOp({1: 1, -1: n})
    lam = n ** 2
    A = ad_power(Lam, lam, 1)
    assert A[1] == (n + 1) ** 2 - n ** 2
    assert A[-1] == n * ((n - 1) ** 2 - n ** 2)


def test_delta_identities():
    assert delta_identities() == {"delta3": 6, "step2": 48, "back1": -6}


def _lam(spec, N=40):
    table = recurrence_table(eigen_sequence(family_operator(spec), N))
    reconstruct_table(table)
    return shiftop_from_table(table)


def test_hermite_certificate():
    spec = FamilySpec.make("hermite")
    cert = ad_condition_check(family_operator(spec), _lam(spec))
    assert cert.matches and cert.adk == ShiftOp({0: -2})


def test_appell_certificate():
    spec = FamilySpec.make("appell", k=3, a1=1, a2=2, a3=3)
    cert = ad_condition_check(family_operator(spec), _lam(spec))
    assert cert.matches_6a3
    assert tuple(cert.alpha_beta_gamma_delta) == (0, 0, 0, 18)
    assert cert.ad4.is_zero()


def test_mismatch_offsets():
    L = family_operator(FamilySpec.make("cubicpoint", p=0, nu=1, mu=2))
    with pytest.raises(Mismatch) as info:
        ad_condition_check(L, ShiftOp({1: 1, 0: n, -1: 1, -2: n + 1}))
    assert info.value.power == 3 and info.value.offset == -6
    with pytest.raises(Mismatch) as info:
        ad_condition_check(L, ShiftOp({1: 1, 0: 2, -1: n}))
    assert info.value.offset == -3
    cert = ad_condition_check(L, ShiftOp({1: 1, -1: n}), strict=False)
    assert not cert.matches and cert.mismatch.offset == -3


def test_peel_powers():
    Lam = ShiftOp({1: 1, 0: n, -1: n ** 2})
    A = poly_of(Lam, [3, 0, Fraction(1, 2)])
    assert peel_powers(A, Lam, 2) == [3, 0, Fraction(1, 2)]
    assert peel_powers(ShiftOp({0: n}), Lam, 2) is None
    with pytest.raises(NotMonic):
        peel_powers(A, ShiftOp({1: 2}), 1)


def test_apply_truncates_negative_indices():
    seq = [XPoly.of(1), XPoly.of(0, 1)]
    A = ShiftOp({0: 1, -1: 5, -3: 7})
    assert A.apply(seq, 1) == XPoly.of(5, 1)


@pytest.mark.parametrize("spec", catalog_pairs(), ids=str)
def test_duality_on_catalog(spec):
    L = family_operator(spec)
    seq = eigen_sequence(L, 40)
    table = recurrence_table(seq)
    reconstruct_table(table)
    report = duality_check(L, seq, shiftop_from_table(table), jmax=L.order + 1)
    assert report.ok, report.failures
