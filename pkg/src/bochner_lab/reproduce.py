"""Reproduction suite for the order-3 classification computations.

Each case returns a list of :class:`Check` records.  A check with
``status == "info"`` documents a computed value without asserting it.
Case keys (``3.1``, ``3.2``, ``4``, ``5``, ``main``, ``appendix``) are the
command-line selectors.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .catalog import FamilySpec, compare_with_printed, expected_recurrence, family_operator
from .diffop import XPoly, eigen_sequence
from .exactnum import N, MPoly, RatFn, delta, falling
from .recurrence import reconstruct_table, recurrence_table
from .shiftop import Mismatch, ShiftOp, ad_condition_check, delta_identities, shiftop_from_table
from .symbolic import (ansatz, ansatz_lambda_n, ansatz_linear_a3, ansatz_pure, ansatz_quadratic,
                       falling_expansion, leading_linear_terms, parameter_constraints, symbolic_b,
                       symbolic_p)

n = MPoly.var(N)


@dataclass
class Check:
    name: str
    status: str  # "pass" | "fail" | "info"
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"


def _check(name: str, ok: bool, detail: str = "") -> Check:
    return Check(name, "pass" if ok else "fail", detail)


def _v(name: str) -> MPoly:
    return MPoly.var(name)


# -- shared constructions -------------------------------------------------------------------

def cleared_denominator() -> MPoly:
    a11 = _v("a11")
    f = lambda c: a11 + 2 * n - c
    return 24 * f(5) * f(4) * f(3) ** 2 * f(2) ** 4 * f(1)


def b3_cleared(cascade: str = "unshifted", **fixed) -> MPoly:
    """``b_3`` of the quadratic-lambda shape times :func:`cleared_denominator`."""
    bs = symbolic_b(ansatz_quadratic(**fixed), 3, cascade=cascade)
    r = bs.b[3] * RatFn.coerce(cleared_denominator())
    if not r.is_polynomial():
        raise ValueError(f"cleared b_3 is not a polynomial (denominator {r.den})")
    return r.as_poly()


def b5_exact_form() -> RatFn:
    a11 = _v("a11")
    f = lambda c: a11 + 2 * n - c
    return (falling(n, 5) * (3 * a11 + 5 * n - 16)) / (9 * f(8) * f(7) * f(5) * f(4))


def b5_printed_form() -> RatFn:
    a11 = _v("a11")
    f = lambda c: a11 + 2 * n - c
    return (falling(n, 5) * (3 * a11 + 5 * n - 16)) / (9 * f(2) * f(7) * f(5) * f(4))


def m_coefficients(cascade: str = "unshifted") -> Dict[int, MPoly]:
    """Coefficients of ``n^k`` in the cleared ``b_3`` with ``a3 = 1`` constant."""
    num = b3_cleared(cascade, a32=0, a31=0, a30=1, a21=0)
    return {c.power: c.coefficient for c in parameter_constraints(RatFn.coerce(num))}


TYPE1_TRIPLES = [(1, 2, 3), (Fraction(2, 3), -1, Fraction(5, 7)), (-3, Fraction(1, 2), 2),
                 (5, 4, Fraction(-1, 3))]
APPELL_TRIPLES = [(1, 2, 3), (Fraction(2, 3), -1, Fraction(5, 7)), (-3, Fraction(1, 2), 2),
                  (5, 4, Fraction(-1, 3))]


def _spec(family: str, triple) -> FamilySpec:
    a1, a2, a3 = triple
    return FamilySpec.make(family, k=3, a1=a1, a2=a2, a3=a3)


def symbolic_order3(family: str):
    """Symbolic ``a1, a2, a3`` version of the order-3 type 1 / Appell operator."""
    if family == "type1":
        return ansatz({(1, 1): 1, (1, 0): "a1", (2, 1): "a2", (3, 2): "a3"})
    return ansatz({(1, 1): 1, (1, 0): "a1", (2, 0): "a2", (3, 0): "a3"})


# -- cases --------------------------------------------------------------------------------

def case_lambda_linear_quadratic_a3() -> List[Check]:
    out = []
    an = ansatz_lambda_n()
    p1 = symbolic_p(an, 1)
    a21 = _v("a21")
    out.append(_check("p1 = (n)_3 + (n)_2 a21", p1 == falling(n, 3) + falling(n, 2) * a21, str(p1)))
    bs = symbolic_b(an, 3)
    b3 = bs.b[3]
    zero = b3.subs({"a31": 0, "a30": 0, "a20": 0})
    out.append(_check("b3 = 0 when a31 = a30 = a20 = 0", zero.is_zero(), str(zero)))
    got = leading_linear_terms(b3, ["a31", "a30", "a20"])
    want = {"a31": (7, Fraction(9, 2)), "a30": (4, Fraction(9, 2)), "a20": (6, Fraction(3))}
    ok = all(a in got and got[a][0] == k and got[a][1] == c for a, (k, c) in want.items())
    detail = ", ".join(f"{a}: n^{k} * ({c})" for a, (k, c) in sorted(got.items()))
    out.append(_check("b3 leading linear terms 9/2 n^7 a31, 9/2 n^4 a30, 3 n^6 a20", ok, detail))
    bu = symbolic_b(an, 3, cascade="unshifted").b[3]
    got_u = leading_linear_terms(bu, ["a31", "a30", "a20"])
    out.append(Check("unshifted-cascade b3 leading linear terms", "info",
                     ", ".join(f"{a}: n^{k} * ({c})" for a, (k, c) in sorted(got_u.items()))))
    return out


def case_lambda_linear_linear_a3() -> List[Check]:
    out = []
    an = ansatz_linear_a3()
    bs = symbolic_b(an, 2)
    b0, b1, b2 = bs.b[0], bs.b[1], bs.b[2]
    a21, a31, a30, a20 = (_v(s) for s in ("a21", "a31", "a30", "a20"))
    out.append(_check("b0 = -2 n a21", b0 == -2 * n * a21, str(b0)))
    b1_want = (falling(n, 2) * (2 * a21 ** 2 - 3 * a31) - 2 * n * a20) / 2
    out.append(_check("b1 = ((n)_2 (2 a21^2 - 3 a31) - 2 n a20)/2", b1 == b1_want, str(b1)))
    eq1 = 4 * a21 ** 2 - 2 * delta(b1, 2) - 6 * a31
    out.append(_check("4 a21^2 - 2 D^2 b1 = 6 a31 identically", eq1 == 0, str(eq1)))
    gamma, dlt = 6 * a31, 6 * a30
    eq2 = -3 * delta(b2, 2) - (gamma * b0 + dlt)
    out.append(_check("-3 D^2 b2 = gamma b0 + delta identically", eq2 == 0, str(eq2)))
    A = falling_expansion(b2.as_poly())
    zero = MPoly.const(0)
    ok = 3 * A.get(3, zero) == 2 * a21 * a31 and A.get(2, zero) == -a30
    out.append(_check("3 A3 = 2 a21 a31 and A2 = -a30", ok,
                      f"A3 = {A.get(3, zero)}, A2 = {A.get(2, zero)}"))
    eq3 = -b1 * 6 * gamma + 6 * delta(b2) - 6 * a30 * b1
    out.append(Check("third ad equation residual (a constraint)", "info", str(eq3)))
    rel = b1 * (gamma + a30) - delta(b2)
    out.append(Check("b1 (gamma + a30) - D b2 (a constraint)", "info", str(rel)))
    appell = rel.subs({"a31": 0, "a21": 0})
    out.append(Check("same relation on the Appell branch a31 = a21 = 0", "info", str(appell)))
    return out


def case_lambda_quadratic() -> List[Check]:
    out = []
    an = ansatz_pure()
    bs = symbolic_b(an, 5)
    b = bs.b
    zeros = [j for j in (0, 1, 3, 4) if not b[j].is_zero()]
    out.append(_check("pure case: b0 = b1 = b3 = b4 = 0", not zeros, f"nonzero: {zeros}"))
    p3 = bs.p[3]
    a11 = _v("a11")
    out.append(_check("p3 (12 - 6n - 3 a11) = -(n)_3", p3 * (12 - 6 * n - 3 * a11) == -falling(n, 3),
                      str(p3)))
    b2_ok = b[2] == -delta(p3) and not b[2].is_zero()
    out.append(_check("b2 = -D p3 != 0", b2_ok, str(b[2])))
    out.append(_check("b5 closed form (oracle-verified denominator a11 + 2n - 8)",
                      b[5] == b5_exact_form(), str(b[5])))
    # concrete oracle at a11 = 3
    L = an.specialize({"a11": 3})
    table = recurrence_table(eigen_sequence(L, 16))
    sym = b[5].subs({"a11": 3})
    bad = [k for k in range(5, 16) if table.b(5, k) != sym(k)]
    out.append(_check("symbolic b5 equals expansion of x P_n at a11 = 3, n = 5..15", not bad,
                      f"mismatch at {bad}" if bad else ""))
    out.append(Check("bandwidth of the pure case at a11 = 3, N = 16", "info", str(table.bandwidth)))
    m = m_coefficients()
    a20, a10 = _v("a20"), _v("a10")
    out.append(_check("m9 = 8 (96 a20^2 + 288 a10)", m.get(9) == 8 * (96 * a20 ** 2 + 288 * a10),
                      str(m.get(9))))
    return out


def _random_poly(rng: random.Random, degree: int) -> MPoly:
    out = MPoly.const(0)
    while out.is_zero():
        out = sum((Fraction(rng.randint(-9, 9), rng.randint(1, 5)) * n ** i
                   for i in range(degree + 1)), MPoly.const(0))
    return out


def random_mismatch_trials(which: int, trials: int = 5, seed: int = 2024) -> List[Optional[int]]:
    """Offsets reported by ad_condition_check for random ``Lambda`` with ``b_which != 0``
    (and ``b_j = 0`` for ``j > which``) against a cubic-lambda operator."""
    rng = random.Random(seed + which)
    offsets = []
    for _ in range(trials):
        L = family_operator(FamilySpec.make("cubicpoint", p=rng.randint(-3, 3),
                                            nu=rng.randint(-5, 5), mu=rng.randint(-5, 5)))
        band = {1: 1}
        for j in range(which + 1):
            band[-j] = _random_poly(rng, rng.randint(0, 2))
        try:
            ad_condition_check(L, ShiftOp(band))
            offsets.append(None)
        except Mismatch as exc:
            offsets.append(exc.offset)
    return offsets


def cubicpoint_check(p, nu=2, mu=-1, N: int = 12):
    L = family_operator(FamilySpec.make("cubicpoint", p=p, nu=nu, mu=mu))
    seq = eigen_sequence(L, N)
    shifted = XPoly.of(-Fraction(p), 1)
    power_ok = all(seq[k] == _xpow(shifted, k) for k in range(N + 1))
    table = recurrence_table(seq)
    b0_ok = all(table.b(0, k) == p for k in range(N))
    return power_ok, table.bandwidth, b0_ok, L


def _xpow(q: XPoly, k: int) -> XPoly:
    out = XPoly.of(1)
    for _ in range(k):
        out = out * q
    return out


def case_lambda_cubic() -> List[Check]:
    out = []
    ids = delta_identities()
    out.append(_check("D^3 lambda = 6", ids["delta3"] == 6, str(ids["delta3"])))
    out.append(_check("-l(n-6) + 3l(n-4) - 3l(n-2) + l(n) = 48", ids["step2"] == 48, str(ids["step2"])))
    out.append(_check("l(n-3) - 3l(n-2) + 3l(n-1) - l(n) = -6", ids["back1"] == -6, str(ids["back1"])))
    offs = random_mismatch_trials(2)
    out.append(_check("random Lambda with b2 != 0 fails at T^-6", all(o == -6 for o in offs), str(offs)))
    offs = random_mismatch_trials(1)
    out.append(_check("random Lambda with b1 != 0, b2 = 0 fails at T^-3", all(o == -3 for o in offs),
                      str(offs)))
    for p in (0, 1, -2):
        power_ok, d, b0_ok, L = cubicpoint_check(p)
        out.append(_check(f"cubicpoint p = {p}: P_n = (x - p)^n, d = 0, b0 = p",
                          power_ok and d == 0 and b0_ok, f"d = {d}"))
        a3 = L.a(3)
        value = sum((6 * a3[j] * Fraction(p) ** j for j in range(4)), Fraction(0))
        out.append(_check(f"cubicpoint p = {p}: alpha b0^3 + beta b0^2 + gamma b0 + delta = 0",
                          value == 0, str(value)))
    return out


def case_order3_families(N: int = 40) -> List[Check]:
    out = []
    for family, triples in (("type1", TYPE1_TRIPLES), ("appell", APPELL_TRIPLES)):
        for triple in triples:
            spec = _spec(family, triple)
            L = family_operator(spec)
            seq = eigen_sequence(L, N)
            table = recurrence_table(seq)
            out.append(_check(f"{spec}: d = 2 at N = {N}", table.bandwidth == 2, str(table.bandwidth)))
            reconstruct_table(table)
            cmp = compare_with_printed(table.reconstructed, expected_recurrence(spec))
            out.append(Check(f"{spec}: index-shift scan", "info",
                             f"matches {cmp.matches}, verdict sigma = {cmp.verdict}"))
            if family == "appell":
                cert = ad_condition_check(L, shiftop_from_table(table), strict=False)
                abcd = cert.alpha_beta_gamma_delta
                want = (0, 0, 0, 6 * Fraction(triple[2]))
                ok = cert.matches and abcd is not None and all(x == y for x, y in zip(abcd, want))
                out.append(_check(f"{spec}: ad^3 = 6 a3 I and ad^4 = 0", ok,
                                  f"(alpha, beta, gamma, delta) = {tuple(map(str, abcd or ()))}"))
        an = symbolic_order3(family)
        bs = symbolic_b(an, 5)
        nz = [j for j in (3, 4, 5) if not bs.b[j].is_zero()]
        out.append(_check(f"{family}(3) symbolic: b3 = b4 = b5 = 0", not nz, f"nonzero: {nz}"))
        cmp = compare_with_printed(bs.b, expected_recurrence(family=family, symbolic=True))
        out.append(_check(f"{family}(3) symbolic: printed b0, b1, b2 match under one index shift",
                          cmp.verdict is not None, f"matches {cmp.matches}, sigma = {cmp.verdict}"))
        if family == "appell":
            Lam = ShiftOp.from_recurrence({j: bs.b[j] for j in range(3)})
            cert = ad_condition_check(an.operator, Lam, strict=False)
            abcd = cert.alpha_beta_gamma_delta
            want = (0, 0, 0, 6 * _v("a3"))
            ok = cert.matches and abcd is not None and all(x == y for x, y in zip(abcd, want))
            out.append(_check("appell(3) symbolic: (alpha, beta, gamma, delta) = (0, 0, 0, 6 a3)", ok,
                              str(tuple(map(str, abcd or ())))))
    return out


def case_cleared_b3() -> List[Check]:
    out = []
    for label, fixed, deg, lc in (("a32 = 1", dict(a32=1), 13, 11184),
                                  ("a32 = 0, a31 = 1", dict(a32=0), 11, 4224)):
        base = dict(fixed, a31=1, a30=2, a21=0, a20=3, a10=7)
        poly = b3_cleared("unshifted", **base)
        parts = poly.coefficients_in(N)
        top = max(parts)
        lead = parts[top]
        ok = top == deg and lead == lc
        out.append(_check(f"cleared b3 ({label}): degree {deg}, leading coefficient {lc}", ok,
                          f"degree {top}, leading {lead}"))
        try:
            exact = b3_cleared("exact", **base)
            out.append(Check(f"exact-cascade cleared b3 ({label})", "info", f"degree {exact.degree(N)}"))
        except ValueError as exc:
            out.append(Check(f"exact-cascade cleared b3 ({label})", "info", str(exc)))
    m = m_coefficients()
    a20, a10 = _v("a20"), _v("a10")
    out.append(_check("m9 = 8 (96 a20^2 + 288 a10)", m.get(9) == 8 * (96 * a20 ** 2 + 288 * a10),
                      str(m.get(9))))
    m6 = m[6].subs({"a11": 2}).subs({"a10": -a20 ** 2 / 3})
    m7 = m[7].subs({"a11": 2}).subs({"a10": -a20 ** 2 / 3})
    m6_want = Fraction(-64, 3) * a20 ** 2 * (27 + 4 * a20 ** 3)
    m7_want = Fraction(64, 3) * a20 ** 2 * (9 + 2 * a20 ** 3)
    out.append(_check("m6 = -64/3 a20^2 (27 + 4 a20^3)", m6 == m6_want, str(m6)))
    out.append(_check("m7 = 64/3 a20^2 (9 + 2 a20^3)", m7 == m7_want, str(m7)))
    g = (m6.exquo(a20 ** 2)).gcd(m7.exquo(a20 ** 2))
    out.append(_check("m6, m7 have no common nonzero root", g.is_constant(), f"gcd = {g}"))
    b5 = symbolic_b(ansatz_pure(), 5).b[5]
    out.append(_check("b5 equals the printed closed form", b5 == b5_printed_form(),
                      f"computed {b5}"))
    return out


CASES: Dict[str, Callable[[], List[Check]]] = {
    "3.1": case_lambda_linear_quadratic_a3,
    "3.2": case_lambda_linear_linear_a3,
    "4": case_lambda_quadratic,
    "5": case_lambda_cubic,
    "main": case_order3_families,
    "appendix": case_cleared_b3,
}


@dataclass
class CaseResult:
    name: str
    checks: List[Check] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)


def run_case(name: str) -> CaseResult:
    try:
        return CaseResult(name, CASES[name]())
    except Exception as exc:  # reported, not swallowed: the case fails
        return CaseResult(name, [], f"{type(exc).__name__}: {exc}")
