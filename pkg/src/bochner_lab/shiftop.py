"""Finite-band shift operators ``sum_j c_j(n) T^j`` and the ad-condition.

Composition follows ``(f T^i)(g T^j) = f(n) g(n+i) T^(i+j)``, so a shift
operator acts on a sequence by ``(A P)_n = sum_j c_j(n) P_{n+j}``.  With this
rule ``x P_n = (Lambda P)_n`` and ``L P_n = lambda(n) P_n`` turn ``ad_x L``
into ``-ad_Lambda lambda`` where ``ad_A B = A B - B A``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .diffop import DiffOp, EigenSeq, WeylOp, XPoly, ad_x
from .exactnum import N, MPoly, RatFn, shift_n, simplify_value


class Mismatch(ArithmeticError):
    """``power`` is the ad-power whose check failed; ``offset`` the lowest
    offending ``T``-offset; ``difference`` = computed − expected there."""

    def __init__(self, power: int, offset: int, difference: RatFn):
        super().__init__(f"ad^{power}: mismatch at T^{offset}, difference {difference}")
        self.power = power
        self.offset = offset
        self.difference = difference


class NotMonic(ValueError):
    pass


def _rat(v) -> RatFn:
    return RatFn.coerce(v)


@dataclass(frozen=True)
class ShiftOp:
    band: Tuple[Tuple[int, RatFn], ...]

    def __init__(self, band: Mapping[int, object] | Iterable[Tuple[int, object]] = ()):
        items = band.items() if isinstance(band, Mapping) else band
        acc: Dict[int, RatFn] = {}
        for j, c in items:
            c = _rat(c)
            acc[j] = acc[j] + c if j in acc else c
        object.__setattr__(self, "band", tuple(sorted((j, c) for j, c in acc.items() if not c.is_zero())))

    # -- constructors ----------------------------------------------------------------

    @classmethod
    def T(cls, k: int = 1) -> "ShiftOp":
        return cls({k: 1})

    @classmethod
    def identity(cls) -> "ShiftOp":
        return cls({0: 1})

    @classmethod
    def mult(cls, f) -> "ShiftOp":
        """Multiplication operator ``f(n) I``."""
        return cls({0: f})

    @classmethod
    def from_recurrence(cls, b: Mapping[int, object]) -> "ShiftOp":
        """``Lambda = T + sum_j b_j(n) T^(-j)``."""
        band = {1: 1}
        for j, v in b.items():
            band[-j] = v
        return cls(band)

    # -- structure -------------------------------------------------------------------

    @property
    def coeffs(self) -> Dict[int, RatFn]:
        return dict(self.band)

    def __getitem__(self, j: int) -> RatFn:
        return dict(self.band).get(j, RatFn.coerce(0))

    @property
    def offsets(self) -> List[int]:
        return [j for j, _ in self.band]

    @property
    def top(self) -> Optional[int]:
        return self.band[-1][0] if self.band else None

    @property
    def bottom(self) -> Optional[int]:
        return self.band[0][0] if self.band else None

    def is_zero(self) -> bool:
        return not self.band

    def is_monic(self) -> bool:
        return self.top == 1 and self[1] == 1

    # -- arithmetic ------------------------------------------------------------------

    def __add__(self, other: "ShiftOp") -> "ShiftOp":
        return ShiftOp(list(self.band) + list(other.band))

    def __sub__(self, other: "ShiftOp") -> "ShiftOp":
        return self + (-other)

    def __neg__(self) -> "ShiftOp":
        return ShiftOp([(j, -c) for j, c in self.band])

    def scale(self, c) -> "ShiftOp":
        c = _rat(c)
        return ShiftOp([(j, c * v) for j, v in self.band])

    def __matmul__(self, other: "ShiftOp") -> "ShiftOp":
        return compose(self, other)

    def __pow__(self, k: int) -> "ShiftOp":
        out = ShiftOp.identity()
        for _ in range(k):
            out = compose(out, self)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ShiftOp):
            return NotImplemented
        return self.band == other.band

    def __hash__(self):
        return hash(self.band)

    def subs(self, values) -> "ShiftOp":
        return ShiftOp([(j, c.subs(values)) for j, c in self.band])

    # -- evaluation ------------------------------------------------------------------

    def at(self, n) -> Dict[int, object]:
        return {j: c.evaluate({N: n}) for j, c in self.band}

    def apply(self, seq: Sequence[XPoly], n: int) -> XPoly:
        """``(A P)_n`` with ``P_m = 0`` for ``m < 0``."""
        out = XPoly()
        for j, c in self.band:
            m = n + j
            if m < 0:
                continue
            if m >= len(seq):
                raise IndexError(f"P_{m} is beyond the sequence")
            out = out + seq[m].scale(simplify_value(c.subs({N: n})))
        return out

    def __str__(self) -> str:
        if not self.band:
            return "0"
        parts = []
        for j, c in reversed(self.band):
            t = "I" if j == 0 else ("T" if j == 1 else f"T^{j}" if j > 0 else f"T^({j})")
            parts.append(t if c == 1 else f"({c})*{t}")
        return " + ".join(parts)


def compose(A: ShiftOp, B: ShiftOp) -> ShiftOp:
    out: Dict[int, RatFn] = {}
    for i, f in A.band:
        for j, g in B.band:
            term = f * shift_n(g, i)
            out[i + j] = out[i + j] + term if i + j in out else term
    return ShiftOp(out)


def ad(A: ShiftOp, B: ShiftOp) -> ShiftOp:
    return compose(A, B) - compose(B, A)


def ad_power(Lam: ShiftOp, lam, k: int) -> ShiftOp:
    """``ad^k_Lambda lambda``; at ``k = 1`` the ``T^j`` coefficient is
    ``c_j(n) (lambda(n+j) - lambda(n))``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = ShiftOp.mult(lam)
    for _ in range(k):
        out = ad(Lam, out)
    return out


def ad_powers(Lam: ShiftOp, lam, k: int) -> List[ShiftOp]:
    """``[ad^1, ..., ad^k]``."""
    out, cur = [], ShiftOp.mult(lam)
    for _ in range(k):
        cur = ad(Lam, cur)
        out.append(cur)
    return out


def poly_of(Lam: ShiftOp, coeffs: Sequence) -> ShiftOp:
    """``sum_i coeffs[i] Lambda^i`` (Horner)."""
    out = ShiftOp()
    for c in reversed(list(coeffs)):
        out = compose(out, Lam) + ShiftOp.mult(c)
    return out


def peel_powers(A: ShiftOp, Lam: ShiftOp, degree: int) -> Optional[List[RatFn]]:
    """Write ``A = sum_{i<=degree} c_i Lambda^i`` with ``n``-free ``c_i``.

    Requires monic ``Lambda`` with top offset 1.  Returns ``[c_0, ..., c_degree]``
    or ``None`` when ``A`` is not such a polynomial.
    """
    if not Lam.is_monic():
        raise NotMonic("peeling needs Lambda = T + lower terms")
    powers = [Lam ** i for i in range(degree + 1)]
    coeffs = [RatFn.coerce(0)] * (degree + 1)
    rest = A
    for i in range(degree, -1, -1):
        c = rest[i]
        if N in c.variables:
            return None
        coeffs[i] = c
        if not c.is_zero():
            rest = rest - powers[i].scale(c)
    return coeffs if rest.is_zero() else None


@dataclass
class AdCertificate:
    order: int
    adk: ShiftOp
    adk1: ShiftOp
    expected: ShiftOp
    peeled: Optional[List[RatFn]]
    target: List[RatFn]
    matches: bool
    mismatch: Optional[Mismatch] = field(default=None, repr=False)

    @property
    def ad3(self) -> ShiftOp:
        return self.adk

    @property
    def ad4(self) -> ShiftOp:
        return self.adk1

    @property
    def alpha_beta_gamma_delta(self) -> Optional[Tuple[RatFn, ...]]:
        """``(alpha, beta, gamma, delta)``, highest power first (order 3)."""
        if self.peeled is None:
            return None
        return tuple(reversed(self.peeled))

    @property
    def matches_6a3(self) -> bool:
        return self.order == 3 and self.matches


def _first_difference(power: int, A: ShiftOp, B: ShiftOp) -> Optional[Mismatch]:
    diff = A - B
    if diff.is_zero():
        return None
    j = diff.bottom
    return Mismatch(power, j, diff[j])


def ad_condition_check(L: DiffOp, Lam: ShiftOp, strict: bool = True) -> AdCertificate:
    """Check ``ad^k = k! a_k(Lambda)`` and ``ad^(k+1) = 0`` for order-``k`` ``L``.

    Offsets are scanned upward, ``ad^k`` before ``ad^(k+1)``; the first
    disagreement raises :class:`Mismatch` (or is stored when not ``strict``).
    """
    k = L.order
    lam = L.lambda_poly
    powers = ad_powers(Lam, lam, k + 1)
    adk, adk1 = powers[k - 1], powers[k]
    target = [RatFn.coerce(factorial(k) * L.aij(k, j)) for j in range(k + 1)]
    expected = poly_of(Lam, target)
    mism = _first_difference(k, adk, expected) or _first_difference(k + 1, adk1, ShiftOp())
    peeled = peel_powers(adk, Lam, k) if Lam.is_monic() else None
    cert = AdCertificate(k, adk, adk1, expected, peeled, target, mism is None, mism)
    if mism is not None and strict:
        raise mism
    return cert


# -- identities -------------------------------------------------------------------------

def cubic_lambda() -> MPoly:
    n, nu, mu = MPoly.var(N), MPoly.var("nu"), MPoly.var("mu")
    return n * (n - 1) * (n - 2) + nu * n * (n - 1) + mu * n


def delta_identities() -> Dict[str, Fraction]:
    """Finite differences of ``lambda(n) = (n)_3 + nu (n)_2 + mu n``.

    ``delta3``: ``Delta^3 lambda``; ``step2``: ``-l(n-6) + 3l(n-4) - 3l(n-2) + l(n)``;
    ``back1``: ``l(n-3) - 3l(n-2) + 3l(n-1) - l(n)``.  Each must be a constant;
    a ``ValueError`` is raised otherwise.
    """
    lam = cubic_lambda()
    s = lambda k: shift_n(lam, k)
    exprs = {
        "delta3": s(3) - 3 * s(2) + 3 * s(1) - lam,
        "step2": -s(-6) + 3 * s(-4) - 3 * s(-2) + lam,
        "back1": s(-3) - 3 * s(-2) + 3 * s(-1) - lam,
    }
    out = {}
    for name, e in exprs.items():
        if not e.is_constant():
            raise ValueError(f"{name} is not constant: {e}")
        out[name] = e.constant_value()
    return out


# -- tables and duality -----------------------------------------------------------------

def shiftop_from_table(table) -> ShiftOp:
    """``Lambda`` from a reconstructed recurrence table."""
    if not table.reconstructed:
        raise ValueError("table has no reconstructed closed forms")
    return ShiftOp.from_recurrence(table.reconstructed)


@dataclass
class DualityReport:
    checked: List[Tuple[int, int]]
    failures: List[Tuple[int, int]]

    @property
    def ok(self) -> bool:
        return not self.failures and bool(self.checked)


def duality_check(L: DiffOp, seq: EigenSeq, Lam: ShiftOp, jmax: int = 4,
                  ns: Iterable[int] = range(3, 13)) -> DualityReport:
    """Compare ``ad^j_x L (P_n)`` with ``(-1)^j ad^j_Lambda lambda (P_n)``."""
    W = WeylOp.from_diffop(L)
    powers = ad_powers(Lam, L.lambda_poly, jmax)
    checked, failures = [], []
    for j in range(1, jmax + 1):
        W = ad_x(W)
        A = powers[j - 1].scale(-1 if j % 2 else 1)
        for n in ns:
            lhs = W.apply(seq[n])
            rhs = A.apply(seq.polys, n)
            checked.append((j, n))
            if not (lhs - rhs).is_zero():
                failures.append((j, n))
    return DualityReport(checked, failures)
