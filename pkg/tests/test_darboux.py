import pytest

from bochner_lab.catalog import FamilySpec, family_operator
from bochner_lab.darboux import (AUTO, Breakdown, NoOperator, ShapeError, bispectral_completion,
                                 factor_lu, satisfies_eigen_equation, swap_and_transform)
from bochner_lab.diffop import eigen_sequence
from bochner_lab.exactnum import MPoly
from bochner_lab.recurrence import reconstruct_table, recurrence_table
from bochner_lab.shiftop import ShiftOp, compose, shiftop_from_table

n = MPoly.var("n")


def laguerre(alpha, N=30):
    L = family_operator(FamilySpec.make("laguerre", alpha=alpha))
    seq = eigen_sequence(L, N + 1)
    table = recurrence_table(seq)
    reconstruct_table(table)
    return L, seq, shiftop_from_table(table)


def test_laguerre_factorization():
    _, seq, Lam = laguerre(1)
    assert Lam == ShiftOp({1: 1, 0: 2 * n + 2, -1: n * n + n})
    fac = factor_lu(Lam, 0, 1, 30)
    assert fac.certify()
    assert fac.h_closed == n + 1 and fac.f_closed == n
    assert compose(fac.D1, fac.D2) == Lam


def test_transformed_sequence_conjugation():
    _, seq, Lam = laguerre(1)
    fac = factor_lu(Lam, 0, 1, 30)
    ts = swap_and_transform(fac, seq)
    assert ts.verified
    assert ts.lamhat == ShiftOp({1: 1, 0: 2 * n + 1, -1: n * n - 1})
    for k in range(1, 30):
        assert ts[k] == seq[k] + seq[k - 1].scale(fac.h[k])


def test_completion_recovers_original_operator():
    L, seq, _ = laguerre(1, 20)
    ops = bispectral_completion(seq, 2)
    assert len(ops) == 1
    # basis vectors are scaled so the last unknown is 1: x d^2 + (2 - x) d = -L
    assert ops[0].coeffs == tuple(-q for q in L.coeffs)
    assert all(satisfies_eigen_equation(ops[0], P) for P in seq.polys)


def test_completion_of_transformed_sequence():
    _, seq, Lam = laguerre(1)
    ts = swap_and_transform(factor_lu(Lam, 0, 1, 30), seq)
    ops = bispectral_completion(ts.polys, 4)
    assert ops
    assert max(op.order for op in ops) == 4
    for op in ops:
        assert all(satisfies_eigen_equation(op, P) for P in ts.polys)


def test_no_operator_below_order():
    L = family_operator(FamilySpec.make("hermite"))
    with pytest.raises(NoOperator):
        bispectral_completion(eigen_sequence(L, 15), 1)


def test_breakdown():
    Lam = ShiftOp({1: 1, -1: n})  # Hermite: u = 0, v = n
    with pytest.raises(Breakdown) as info:
        factor_lu(Lam, 0, 1, 10)
    assert info.value.n == 1
    with pytest.raises(Breakdown):
        factor_lu(Lam, 0, 0, 10)


def test_auto_h0_and_shape_guards():
    _, seq, Lam = laguerre(1)
    fac = factor_lu(Lam, 0, AUTO, 10)
    assert fac.h0_auto and fac.h[0] == 1
    with pytest.raises(ShapeError):
        factor_lu(ShiftOp({1: 1, -2: n}), 0, 1, 5)
    with pytest.raises(ShapeError):
        swap_and_transform(factor_lu(ShiftOp({1: 1, 0: n + 1}), 0, 1, 5), seq)
