from fractions import Fraction

import pytest

from bochner_lab.diffop import eigen_sequence
from bochner_lab.exactnum import MPoly, RatFn, falling
from bochner_lab.recurrence import recurrence_table
from bochner_lab.symbolic import (IdenticallyResonant, ansatz, ansatz_lambda_n, ansatz_linear_a3,
                                  ansatz_pure, ansatz_quadratic, cleared_numerator,
                                  falling_expansion, leading_linear_terms, linear_part,
                                  order3_ansatz, parameter_constraints, symbolic_b, symbolic_p)

n = MPoly.var("n")
V = MPoly.var

GENERIC = {"a33": 2, "a32": Fraction(1, 3), "a31": -1, "a30": Fraction(2, 5), "a22": 3,
           "a21": Fraction(-1, 2), "a20": Fraction(3, 7), "a11": Fraction(5, 3), "a10": -2}


FULL = {k: None for k in GENERIC}


@pytest.mark.parametrize("name, an, jmax", [
    ("full", order3_ansatz(**FULL), 2),  # every coefficient free; j = 3 costs minutes
    ("lambda=n", ansatz_lambda_n(), 4),
    ("linear a3", ansatz_linear_a3(), 4),
    ("quadratic lambda", order3_ansatz(**dict(FULL, a33=0, a32=0, a22=1)), 3),
    ("pure", ansatz_pure(), 5),
])
def test_oracle_equivalence(name, an, jmax):
    bs = symbolic_b(an, jmax)
    values = {k: v for k, v in GENERIC.items() if k in an.parameters}
    L = an.specialize(values)
    table = recurrence_table(eigen_sequence(L, 21))
    for j in range(jmax + 1):
        sym = bs.b[j].subs(values)
        for k in range(max(2, j), 21):
            assert sym(k) == table.b(j, k), (j, k)


def test_identically_resonant():
    an = ansatz({(1, 0): 1, (2, 1): "a21"})  # lambda = 0
    with pytest.raises(IdenticallyResonant):
        symbolic_p(an, 1)


def test_cascade_conventions_differ_only_from_b2():
    an = ansatz_quadratic(a32=1)
    exact = symbolic_b(an, 3)
    flat = symbolic_b(an, 3, cascade="unshifted")
    assert exact.b[0] == flat.b[0] and exact.b[1] == flat.b[1]
    assert exact.b[2] != flat.b[2]


def test_lambda_n_vanishing():
    b3 = symbolic_b(ansatz_lambda_n(), 3).b[3]
    assert b3.subs({"a31": 0, "a30": 0, "a20": 0}).is_zero()
    assert not b3.is_zero()


def test_linear_a3_low_coefficients():
    bs = symbolic_b(ansatz_linear_a3(), 1)
    assert bs.b[0] == -2 * n * V("a21")
    assert bs.p[1] == falling(n, 2) * V("a21")


def test_pure_case_p3():
    p3 = symbolic_p(ansatz_pure(), 3)
    assert p3 == falling(n, 3) / (6 * n + 3 * V("a11") - 12)


def test_constraints_and_linearization():
    b = RatFn(n ** 2 * (V("a") + V("a") * V("b")) + n * V("b") ** 2 - 3, n + 1)
    cons = parameter_constraints(b)
    assert [c.power for c in cons] == [2, 1, 0]
    assert cons[0].coefficient == V("a") + V("a") * V("b")
    lin = parameter_constraints(b, linearize=True)
    assert lin[0].linear == V("a") and lin[1].linear == 0
    assert parameter_constraints(RatFn.coerce(0)) == []
    assert cleared_numerator(b) == n ** 2 * (V("a") + V("a") * V("b")) + n * V("b") ** 2 - 3
    assert linear_part(V("a") ** 2 + 2 * V("b") + 1, ["a", "b"]) == 2 * V("b") + 1


def test_leading_linear_terms():
    b = RatFn(n ** 5 * V("a") * 2 + n ** 3 * V("b") + n ** 7 * V("a") ** 2)
    got = leading_linear_terms(b, ["a", "b"])
    assert got["a"] == (5, 2) and got["b"] == (3, 1)


def test_falling_expansion():
    p = 2 * falling(n, 3) - V("c") * falling(n, 2) + 5
    A = falling_expansion(p)
    assert A[3] == 2 and A[2] == -V("c") and A[0] == 5
