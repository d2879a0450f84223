"""Eigenpolynomial coefficients and recurrence coefficients as functions of n.

Write ``P_n = sum_k p_k(n) x^(n-k)`` with ``p_0 = 1``.  Comparing the
coefficient of ``x^(n-k)`` in ``L P_n = lambda(n) P_n`` gives

    p_k(n) (lambda(n) - lambda(n-k)) = sum_{s=1..min(k, order)} p_{k-s}(n) c_s(n-k+s)

and comparing ``x^(n-j)`` in ``x P_n = P_{n+1} + sum_j b_j(n) P_{n-j}`` gives

    b_j(n) = p_{j+1}(n) - p_{j+1}(n+1) - sum_{i<j} b_i(n) p_{j-i}(n-i).

``cascade="unshifted"`` replaces ``p_{j-i}(n-i)`` by ``p_{j-i}(n)``.  That
variant is not the expansion of ``x P_n``; it is kept because some reference
closed forms were derived with it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .diffop import DiffOp, operator_from_terms
from .exactnum import N, MPoly, RatFn, canonical_context, shift_n

CASCADES = ("exact", "unshifted")


class IdenticallyResonant(ArithmeticError):
    def __init__(self, k: int):
        super().__init__(f"lambda(n) - lambda(n-{k}) vanishes identically")
        self.k = k


class NotPolynomial(ValueError):
    pass


@dataclass(frozen=True)
class SymbolicAnsatz:
    operator: DiffOp
    parameters: Tuple[str, ...]

    def specialize(self, values: Mapping[str, object]) -> DiffOp:
        return self.operator.subs({k: Fraction(v) for k, v in values.items()})


def ansatz(terms: Mapping[Tuple[int, int], object]) -> SymbolicAnsatz:
    """Operator ``sum a_ij x^j d^i`` where a value of ``None`` means the free
    parameter ``a{i}{j}``.  Strings are taken as parameter names."""
    coeffs = {}
    params = set()
    for (i, j), v in terms.items():
        if v is None:
            v = f"a{i}{j}"
        if isinstance(v, str):
            params.add(v)
            v = MPoly.var(v)
        coeffs[(i, j)] = v
    L = operator_from_terms(coeffs, quiet=True)
    return SymbolicAnsatz(L, canonical_context(params))


_ORDER3_KEYS = ("a33", "a32", "a31", "a30", "a22", "a21", "a20", "a11", "a10")


def order3_ansatz(**values) -> SymbolicAnsatz:
    """General order-3 shape.  Unlisted coefficients are 0; ``None`` marks a
    free parameter; e.g. ``order3_ansatz(a32=1, a31=None, a11=1)``."""
    unknown = set(values) - set(_ORDER3_KEYS)
    if unknown:
        raise ValueError(f"unknown coefficients {sorted(unknown)}")
    terms = {(int(k[1]), int(k[2])): (None if v is None else Fraction(v))
             for k, v in values.items()}
    return ansatz({k: v for k, v in terms.items() if v is None or v != 0})


def ansatz_lambda_n() -> SymbolicAnsatz:
    """``(x^2 + a31 x + a30) d^3 + (a21 x + a20) d^2 + x d``."""
    return order3_ansatz(a32=1, a31=None, a30=None, a21=None, a20=None, a11=1)


def ansatz_linear_a3() -> SymbolicAnsatz:
    """``(a31 x + a30) d^3 + (a21 x + a20) d^2 + x d``."""
    return order3_ansatz(a31=None, a30=None, a21=None, a20=None, a11=1)


def ansatz_quadratic(**fixed) -> SymbolicAnsatz:
    """``(a32 x^2 + a31 x + a30) d^3 + (x^2 + a21 x + a20) d^2 + (a11 x + a10) d``."""
    values = dict(a32=None, a31=None, a30=None, a22=1, a21=None, a20=None, a11=None, a10=None)
    values.update(fixed)
    return order3_ansatz(**values)


def ansatz_pure() -> SymbolicAnsatz:
    """``d^3 + x^2 d^2 + a11 x d``."""
    return order3_ansatz(a30=1, a22=1, a11=None)


@dataclass
class BSeries:
    p: Dict[int, RatFn] = field(default_factory=dict)
    b: Dict[int, RatFn] = field(default_factory=dict)
    cascade: str = "exact"


class _PEngine:
    def __init__(self, L: DiffOp):
        self.L = L
        n = MPoly.var(N)
        self.lam = L.lambda_poly
        self.cs = {s: L.c(s, n) for s in range(1, L.order + 1)}
        self.p: Dict[int, RatFn] = {0: RatFn.coerce(1)}

    def get(self, k: int) -> RatFn:
        for m in range(len(self.p), k + 1):
            self.p[m] = self._next(m)
        return self.p[k]

    def _next(self, k: int) -> RatFn:
        den = self.lam - shift_n(self.lam, -k)
        if den.is_zero():
            raise IdenticallyResonant(k)
        acc = RatFn.coerce(0)
        for s in range(1, min(k, self.L.order) + 1):
            c = self.cs[s]
            if c.is_zero() or self.p[k - s].is_zero():
                continue
            acc = acc + self.p[k - s] * shift_n(c, s - k)
        return acc / den


def symbolic_p(an: Union[SymbolicAnsatz, DiffOp], k: int) -> RatFn:
    L = an.operator if isinstance(an, SymbolicAnsatz) else an
    return _PEngine(L).get(k)


def symbolic_b(an: Union[SymbolicAnsatz, DiffOp], jmax: int = 5,
               cascade: str = "exact") -> BSeries:
    if cascade not in CASCADES:
        raise ValueError(f"cascade must be one of {CASCADES}")
    L = an.operator if isinstance(an, SymbolicAnsatz) else an
    eng = _PEngine(L)
    eng.get(jmax + 1)
    b: Dict[int, RatFn] = {}
    for j in range(jmax + 1):
        e = eng.p[j + 1] - shift_n(eng.p[j + 1], 1)
        for i in range(j):
            if b[i].is_zero():
                continue
            pj = eng.p[j - i]
            e = e - b[i] * (shift_n(pj, -i) if cascade == "exact" else pj)
        b[j] = e
    return BSeries(dict(eng.p), b, cascade)


# -- constraints ------------------------------------------------------------------------

@dataclass(frozen=True)
class Constraint:
    power: int
    coefficient: MPoly
    linear: Optional[MPoly] = None


def cleared_numerator(b: RatFn, clear: Optional[MPoly] = None) -> MPoly:
    """``b * clear`` as a polynomial, or the reduced numerator if ``clear`` is None."""
    if clear is None:
        return b.num
    r = b * RatFn.coerce(clear)
    if not r.is_polynomial():
        raise NotPolynomial(f"denominator {b.den} does not divide {clear}")
    return r.as_poly()


def linear_part(p: MPoly, params: Iterable[str]) -> MPoly:
    """Terms of total degree <= 1 in ``params``."""
    params = set(params)
    keep = {}
    for key, c in p.named_terms().items():
        if sum(k for v, k in key if v in params) <= 1:
            keep[key] = c
    return _from_named(keep)


def _from_named(terms) -> MPoly:
    names = canonical_context({v for key in terms for v, _ in key})
    out = {}
    for key, c in terms.items():
        d = dict(key)
        out[tuple(d.get(v, 0) for v in names)] = c
    return MPoly(out, names)


def parameter_constraints(b: RatFn, linearize: bool = False, clear: Optional[MPoly] = None,
                          params: Optional[Iterable[str]] = None) -> List[Constraint]:
    """Coefficients of powers of ``n`` in the cleared numerator, highest first."""
    num = cleared_numerator(b, clear)
    if num.is_zero():
        return []
    if params is None:
        params = [v for v in num.variables if v != N]
    out = []
    for k, coeff in sorted(num.coefficients_in(N).items(), reverse=True):
        out.append(Constraint(k, coeff, linear_part(coeff, params) if linearize else None))
    return out


def leading_linear_terms(b: RatFn, params: Sequence[str]) -> Dict[str, Tuple[int, MPoly]]:
    """For each parameter, the leading ``n``-power of its linear coefficient.

    The result maps ``a`` to ``(k, c)`` where the part of ``b`` linear in
    ``a`` (other listed parameters set to zero) is ``c n^k + lower``.
    Parameters whose linear part vanishes are omitted.
    """
    if not b.is_polynomial():
        raise NotPolynomial("leading_linear_terms expects a polynomial")
    p = b.as_poly()
    out = {}
    for a in params:
        others = {o: 0 for o in params if o != a}
        q = p.subs(others) if others else p
        lin = q.coefficients_in(a).get(1)
        if lin is None or lin.is_zero():
            continue
        parts = lin.coefficients_in(N)
        k = max(parts)
        out[a] = (k, parts[k])
    return out


def falling_expansion(p: MPoly) -> Dict[int, MPoly]:
    """Coefficients ``A_k`` with ``p = sum_k A_k (n)_k``."""
    from .exactnum import falling
    n = MPoly.var(N)
    out = {}
    while not p.is_zero():
        parts = p.coefficients_in(N)
        k = max(parts)
        out[k] = parts[k]
        p = p - parts[k] * falling(n, k)
    return out
