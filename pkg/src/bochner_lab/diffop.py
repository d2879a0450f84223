"""Differential operators in ``x`` with polynomial coefficients.

An operator ``L = sum_{i=1..k} a_i(x) d^i`` is exactly solvable when
``deg a_i <= i`` for all ``i`` and equality holds for some ``i``.  Then
``L x^m = sum_s c_s(m) x^(m-s)`` with ``c_s(m) = sum_i a_{i,i-s} (m)_i`` and
``c_0 = lambda``; eigenpolynomials follow by back-substitution.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .exactnum import N, MPoly, RatFn, falling, simplify_value

Coeff = Union[Fraction, MPoly, RatFn]


class NotExactlySolvable(UserWarning):
    """Operator violates ``deg a_i <= i`` or has no ``i`` with equality."""


class Resonance(ArithmeticError):
    def __init__(self, m: int, n: int):
        super().__init__(f"lambda({m}) = lambda({n}): no unique eigenpolynomial of degree {n}")
        self.m = m
        self.n = n


class EigenCheckFailed(AssertionError):
    pass


def _norm(v) -> Coeff:
    if isinstance(v, int):
        return Fraction(v)
    return simplify_value(v)


def _is_zero(v) -> bool:
    return v == 0


# -- XPoly ------------------------------------------------------------------------------

@dataclass(frozen=True)
class XPoly:
    """Polynomial in ``x``; ``coeffs[m]`` is the coefficient of ``x^m``.

    Coefficients are ``Fraction`` in concrete mode, ``MPoly``/``RatFn`` in
    parameters otherwise.  The zero polynomial has degree -1.
    """

    coeffs: Tuple[Coeff, ...] = ()

    def __post_init__(self):
        cs = [_norm(c) for c in self.coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def of(cls, *coeffs) -> "XPoly":
        return cls(tuple(coeffs))

    @classmethod
    def monomial(cls, m: int, c=1) -> "XPoly":
        return cls((Fraction(0),) * m + (c,))

    @classmethod
    def from_mpoly(cls, p: MPoly) -> "XPoly":
        parts = p.coefficients_in("x")
        if not parts:
            return cls()
        top = max(parts)
        return cls(tuple(parts.get(m, Fraction(0)) for m in range(top + 1)))

    def to_mpoly(self) -> MPoly:
        x = MPoly.var("x")
        out = MPoly.const(0)
        for m, c in enumerate(self.coeffs):
            if isinstance(c, RatFn):
                c = c.as_poly()
            out = out + MPoly.coerce(c) * x ** m
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, m: int) -> Coeff:
        return self.coeffs[m] if 0 <= m < len(self.coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other: "XPoly") -> "XPoly":
        k = max(len(self.coeffs), len(other.coeffs))
        return XPoly(tuple(self[m] + other[m] for m in range(k)))

    def __sub__(self, other: "XPoly") -> "XPoly":
        k = max(len(self.coeffs), len(other.coeffs))
        return XPoly(tuple(self[m] - other[m] for m in range(k)))

    def __neg__(self) -> "XPoly":
        return XPoly(tuple(-c for c in self.coeffs))

    def scale(self, c) -> "XPoly":
        if _is_zero(c):
            return XPoly()
        return XPoly(tuple(c * v for v in self.coeffs))

    def __mul__(self, other: "XPoly") -> "XPoly":
        if not isinstance(other, XPoly):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return XPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return XPoly(tuple(out))

    def shift_up(self, k: int = 1) -> "XPoly":
        """Multiply by ``x^k``."""
        return XPoly((Fraction(0),) * k + self.coeffs) if self.coeffs else self

    def derivative(self, times: int = 1) -> "XPoly":
        cs = self.coeffs
        if times >= len(cs):
            return XPoly()
        return XPoly(tuple(falling(m, times) * cs[m] for m in range(times, len(cs))))

    def compose_affine(self, s, t) -> "XPoly":
        """``q(s*x + t)``."""
        out = XPoly()
        lin = XPoly.of(t, s)
        power = XPoly.of(1)
        for c in self.coeffs:
            out = out + power.scale(c)
            power = power * lin
        return out

    def evaluate(self, x) -> Coeff:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return _norm(acc)

    def subs(self, values: Mapping[str, object]) -> "XPoly":
        return XPoly(tuple(c.subs(values) if isinstance(c, (MPoly, RatFn)) else c
                           for c in self.coeffs))

    def __str__(self) -> str:
        if all(not isinstance(c, RatFn) or c.is_polynomial() for c in self.coeffs):
            return str(self.to_mpoly())
        parts = [f"({c})*x^{m}" for m, c in enumerate(self.coeffs) if not _is_zero(c)]
        return " + ".join(reversed(parts)) or "0"


# -- DiffOp -----------------------------------------------------------------------------

@dataclass(frozen=True)
class DiffOp:
    """``sum_{i=1..order} coeffs[i-1](x) d^i``."""

    coeffs: Tuple[XPoly, ...]
    exactly_solvable: bool
    lambda_poly: MPoly
    violations: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def a(self, i: int) -> XPoly:
        return self.coeffs[i - 1] if 1 <= i <= len(self.coeffs) else XPoly()

    def aij(self, i: int, j: int) -> Coeff:
        return self.a(i)[j]

    @property
    def parameters(self) -> Tuple[str, ...]:
        names = set()
        for q in self.coeffs:
            for c in q.coeffs:
                if isinstance(c, (MPoly, RatFn)):
                    names.update(c.variables)
        return tuple(sorted(names))

    def is_triangular(self) -> bool:
        return all(q.degree <= i for i, q in enumerate(self.coeffs, 1))

    def lam(self, n) -> Coeff:
        """``lambda(n)`` for an integer or symbolic ``n``."""
        if isinstance(n, (int, Fraction)):
            out = Fraction(0)
            for i in range(1, self.order + 1):
                a = self.aij(i, i)
                if not _is_zero(a):
                    out = out + a * falling(Fraction(n), i)
            return _norm(out)
        return self.lambda_poly.subs({N: n})

    def c(self, s: int, m) -> Coeff:
        """Coefficient of ``x^(m-s)`` in ``L x^m``."""
        out = MPoly.const(0) if isinstance(m, MPoly) else Fraction(0)
        for i in range(max(s, 1), self.order + 1):
            a = self.aij(i, i - s)
            if not _is_zero(a):
                out = out + a * falling(m, i)
        return _norm(out) if not isinstance(m, MPoly) else out

    def subs(self, values: Mapping[str, object]) -> "DiffOp":
        return build_operator([q.subs(values) for q in self.coeffs], quiet=True)

    def __str__(self) -> str:
        parts = []
        for i, q in enumerate(self.coeffs, 1):
            if q.is_zero():
                continue
            d = "D" if i == 1 else f"D^{i}"
            parts.append(f"({q})*{d}")
        return " + ".join(reversed(parts))


def build_operator(coeffs: Sequence[XPoly], quiet: bool = False) -> DiffOp:
    """Validate ``[a_1, ..., a_k]`` and compute ``lambda``.

    Construction succeeds for operators that are not exactly solvable; the
    flag is cleared and a :class:`NotExactlySolvable` warning is emitted.
    """
    coeffs = tuple(q if isinstance(q, XPoly) else XPoly(tuple(q)) for q in coeffs)
    if not coeffs:
        raise ValueError("operator needs at least one coefficient")
    if coeffs[-1].is_zero():
        raise ValueError("top coefficient must be nonzero")
    violations = [f"deg a_{i} = {q.degree} > {i}"
                  for i, q in enumerate(coeffs, 1) if q.degree > i]
    if not any(q.degree == i for i, q in enumerate(coeffs, 1)):
        violations.append("no i with deg a_i = i")
    n = MPoly.var(N)
    lam = MPoly.const(0)
    for i, q in enumerate(coeffs, 1):
        a = q[i]
        if isinstance(a, RatFn):
            a = a.as_poly()
        if not _is_zero(a):
            lam = lam + falling(n, i) * a
    op = DiffOp(coeffs, not violations, lam, tuple(violations))
    if violations and not quiet:
        warnings.warn("; ".join(violations), NotExactlySolvable, stacklevel=2)
    return op


def operator_from_terms(terms: Mapping[Tuple[int, int], object], order: Optional[int] = None,
                        quiet: bool = False) -> DiffOp:
    """Build from ``{(i, j): a_ij}`` meaning ``a_ij x^j d^i``."""
    k = order or max(i for i, _ in terms)
    rows: List[List] = [[Fraction(0)] * (k + 2) for _ in range(k)]
    for (i, j), v in terms.items():
        if j >= len(rows[i - 1]):
            rows[i - 1].extend([Fraction(0)] * (j + 1 - len(rows[i - 1])))
        rows[i - 1][j] = rows[i - 1][j] + v
    return build_operator([XPoly(tuple(r)) for r in rows], quiet=quiet)


def apply(L: DiffOp, q: XPoly) -> XPoly:
    out = XPoly()
    for i, a in enumerate(L.coeffs, 1):
        if a.is_zero():
            continue
        d = q.derivative(i)
        if d.is_zero():
            break
        out = out + a * d
    return out


def eigenpolynomial(L: DiffOp, n: int) -> XPoly:
    """Monic degree-``n`` solution of ``L P = lambda(n) P``."""
    if not L.is_triangular():
        raise NotExactlySolvable("; ".join(L.violations))
    lam = [L.lam(m) for m in range(n + 1)]
    for m in range(n):
        if _is_zero(lam[m] - lam[n]):
            raise Resonance(m, n)
    return _eigen_backsub(L, n, lam)


def _eigen_backsub(L: DiffOp, n: int, lam) -> XPoly:
    # p[k] is the coefficient of x^(n-k)
    c = {(s, m): L.c(s, m) for s in range(1, L.order + 1) for m in range(n + 1)}
    p = [Fraction(1)]
    for k in range(1, n + 1):
        acc = Fraction(0)
        for s in range(1, min(k, L.order) + 1):
            cs = c[(s, n - k + s)]
            if not _is_zero(cs) and not _is_zero(p[k - s]):
                acc = acc + p[k - s] * cs
        p.append(_norm(acc / (lam[n] - lam[n - k])) if not _is_zero(acc) else Fraction(0))
    return XPoly(tuple(reversed(p)))


@dataclass(frozen=True)
class EigenSeq:
    """``polys[n]`` is the monic eigenpolynomial of degree ``n``, ``n = 0..N``."""

    operator: DiffOp
    polys: Tuple[XPoly, ...]

    @property
    def N(self) -> int:
        return len(self.polys) - 1

    def __getitem__(self, n: int) -> XPoly:
        return self.polys[n] if n >= 0 else XPoly()

    def __len__(self) -> int:
        return len(self.polys)


def eigen_sequence(L: DiffOp, N: int, check: bool = True) -> EigenSeq:
    """``P_0..P_N``; every entry is re-verified against ``L`` when ``check``."""
    if not L.is_triangular():
        raise NotExactlySolvable("; ".join(L.violations))
    lam = [L.lam(m) for m in range(N + 1)]
    seen: Dict[object, int] = {}
    for m, v in enumerate(lam):
        key = v if not isinstance(v, (MPoly, RatFn)) else str(v)
        if key in seen:
            raise Resonance(seen[key], m)
        seen[key] = m
    polys = []
    for n in range(N + 1):
        P = _eigen_backsub(L, n, lam)
        if check and not (apply(L, P) - P.scale(lam[n])).is_zero():
            raise EigenCheckFailed(f"L P_{n} != lambda({n}) P_{n}")
        polys.append(P)
    return EigenSeq(L, tuple(polys))


# -- general Weyl-algebra elements (used for ad_x) ---------------------------------------

@dataclass(frozen=True)
class WeylOp:
    """``sum_{i>=0} coeffs[i](x) d^i``, order-0 term allowed."""

    coeffs: Tuple[XPoly, ...]

    @classmethod
    def from_diffop(cls, L: DiffOp) -> "WeylOp":
        return cls((XPoly(),) + L.coeffs)

    def apply(self, q: XPoly) -> XPoly:
        out = XPoly()
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                out = out + a * q.derivative(i)
        return out

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)


def ad_x(op: WeylOp, times: int = 1) -> WeylOp:
    """``x∘op − op∘x``; ``[x, a d^i] = −i a d^(i−1)``."""
    for _ in range(times):
        cs = op.coeffs
        op = WeylOp(tuple(cs[i + 1].scale(-(i + 1)) for i in range(len(cs) - 1)))
    return op


def affine_transform(L: DiffOp, s, t) -> DiffOp:
    """Rewrite ``L`` in ``y`` where ``x = s*y + t``.  Never applied implicitly."""
    s = Fraction(s)
    if s == 0:
        raise ValueError("scale must be nonzero")
    return build_operator([q.compose_affine(s, t).scale(1 / s ** i)
                           for i, q in enumerate(L.coeffs, 1)], quiet=True)


# -- operator spec JSON -----------------------------------------------------------------

def operator_to_json(L: DiffOp, variables: Iterable[str] = ()) -> dict:
    names = sorted(set(variables) | set(L.parameters))
    return {"vars": names,
            "coeffs": {str(i): str(q) for i, q in enumerate(L.coeffs, 1)}}


def operator_from_json(spec: Union[dict, str], bindings: Optional[Mapping[str, object]] = None,
                       quiet: bool = True) -> DiffOp:
    from .parser import parse, to_xpoly

    if isinstance(spec, str):
        spec = json.loads(spec)
    names = list(spec.get("vars", []))
    coeffs = spec["coeffs"]
    if not coeffs:
        raise ValueError("operator spec has no coefficients")
    order = max(int(k) for k in coeffs)
    if min(int(k) for k in coeffs) < 1:
        raise ValueError("derivative orders start at 1")
    allowed = set(names) | {"x"}
    qs = []
    for i in range(1, order + 1):
        text = coeffs.get(str(i), "0")
        qs.append(to_xpoly(parse(text, allowed)))
    L = build_operator(qs, quiet=quiet)
    if bindings:
        L = L.subs({k: Fraction(v) for k, v in bindings.items()})
    return L


def load_operator(path: str, bindings=None) -> DiffOp:
    with open(path) as fh:
        return operator_from_json(json.load(fh), bindings)
