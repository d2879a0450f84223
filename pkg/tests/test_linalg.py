import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bochner_lab.linalg import nullspace, rref, solve
from conftest import small_fracs

matrices = st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(small_fracs, min_size=c, max_size=c), min_size=1, max_size=5)
    .map(lambda rows: (rows, c)))


@settings(max_examples=300, deadline=None)
@given(matrices)
def test_nullspace_against_sympy_rank(m):
    rows, ncols = m
    basis = nullspace(rows, ncols)
    for v in basis:
        assert all(sum(r[j] * v[j] for j in range(ncols)) == 0 for r in rows)
    rank = sympy.Matrix(rows).rank()
    assert len(basis) == ncols - rank


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_rref_pivots(m):
    rows, ncols = m
    R, pivots = rref(rows, ncols)
    assert len(pivots) == sympy.Matrix(rows).rank()


def test_solve_consistent():
    x = solve([[1, 1], [1, -1]], [3, 1], 2)
    assert list(x) == [2, 1]
