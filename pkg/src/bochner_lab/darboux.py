"""One-step Darboux transformation of a three-term recurrence.

``Lambda = T + u(n) I + v(n) T^-1`` is factored as ``Lambda - c = D1 D2`` with
``D1 = T + f(n) I`` and ``D2 = I + h(n) T^-1``.  Matching coefficients gives
``u(n) - c = f(n) + h(n+1)`` and ``v(n) = f(n) h(n)``, i.e. the recursion

    f(n) = v(n) / h(n),    h(n+1) = u(n) - c - f(n),    h(0) = h0.

Swapping the factors gives ``hat Lambda = D2 D1 + c`` with
``hat u(n) = f(n) + h(n) + c`` and ``hat v(n) = h(n) f(n-1)``, and the new
sequence is ``hat P_n = P_n + h(n) P_{n-1}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from .diffop import DiffOp, EigenSeq, XPoly, apply, build_operator
from .exactnum import RatFn
from .linalg import nullspace
from .recurrence import NoFit, reconstruct_rational
from .shiftop import ShiftOp

AUTO = "auto"


class Breakdown(ArithmeticError):
    def __init__(self, n: int):
        super().__init__(f"h({n}) = 0: the factorization breaks down")
        self.n = n


class ShapeError(ValueError):
    pass


class NoOperator(ValueError):
    pass


class CompletionUnstable(ValueError):
    """Solution space found on the solve window fails on held-out indices."""


def _uv(Lam: ShiftOp):
    if not Lam.is_monic() or any(j not in (1, 0, -1) for j in Lam.offsets):
        raise ShapeError("Lambda must be T + u(n) I + v(n) T^-1")
    return Lam[0], Lam[-1]


def _fit_or_none(values: Sequence[Fraction], start: int = 0) -> Optional[RatFn]:
    samples = [(start + i, v) for i, v in enumerate(values)]
    budget = len(samples) - 5
    if budget < 0:
        return None
    try:
        return reconstruct_rational(samples, budget // 2, budget // 2, holdout=3)
    except NoFit:
        return None


@dataclass
class DarbouxFactors:
    c: Fraction
    h: List[Fraction]
    f: List[Fraction]
    Lam: ShiftOp
    h0_auto: bool = False
    h_closed: Optional[RatFn] = None
    f_closed: Optional[RatFn] = None

    @property
    def N(self) -> int:
        return len(self.f)

    @property
    def D1(self) -> Optional[ShiftOp]:
        if self.f_closed is None:
            return None
        return ShiftOp({1: 1, 0: self.f_closed})

    @property
    def D2(self) -> Optional[ShiftOp]:
        if self.h_closed is None:
            return None
        return ShiftOp({0: 1, -1: self.h_closed})

    def certify(self) -> bool:
        """``D1 D2 + c`` reproduces ``Lambda`` at ``n = 0..N-1``."""
        u, v = _uv(self.Lam)
        for n in range(self.N):
            if u(n) - self.c != self.f[n] + self.h[n + 1]:
                return False
            if v(n) != self.f[n] * self.h[n]:
                return False
        return True


def factor_lu(Lam: ShiftOp, c, h0: Union[Fraction, int, str], N: int) -> DarbouxFactors:
    """Run the recursion for ``n = 0..N-1``; tabulates ``h(0..N)``, ``f(0..N-1)``.

    ``h0 = "auto"`` uses ``h(0) = 1``.
    """
    u, v = _uv(Lam)
    auto = h0 == AUTO
    h0 = Fraction(1) if auto else Fraction(h0)
    if h0 == 0:
        raise Breakdown(0)
    c = Fraction(c)
    h, f = [h0], []
    for n in range(N):
        fn = v(n) / h[n]
        f.append(fn)
        nxt = u(n) - c - fn
        if nxt == 0:
            raise Breakdown(n + 1)
        h.append(nxt)
    return DarbouxFactors(c, h, f, Lam, auto, _fit_or_none(h), _fit_or_none(f))


@dataclass
class TransformedSeq:
    polys: List[XPoly]
    u_hat: List[Fraction]
    v_hat: List[Optional[Fraction]]
    lamhat: Optional[ShiftOp]
    failures: List[int] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return not self.failures

    def __getitem__(self, n: int) -> XPoly:
        return self.polys[n] if n >= 0 else XPoly()

    def __len__(self) -> int:
        return len(self.polys)


def swap_and_transform(factors: DarbouxFactors, seq: Union[EigenSeq, Sequence[XPoly]]
                       ) -> TransformedSeq:
    """Transform ``P_0..P_N`` and certify ``x hat P_n = hat Lambda hat P_n`` for ``n = 1..N-1``."""
    _, v = _uv(factors.Lam)
    if v.is_zero():
        raise ShapeError("v(n) vanishes identically; Lambda is not a genuine three-term operator")
    polys = list(seq.polys) if isinstance(seq, EigenSeq) else list(seq)
    N = min(len(polys) - 1, factors.N)
    h, f, c = factors.h, factors.f, factors.c
    hat = [polys[0]] + [polys[n] + polys[n - 1].scale(h[n]) for n in range(1, N + 1)]
    u_hat = [f[n] + h[n] + c for n in range(N)]
    v_hat = [None] + [h[n] * f[n - 1] for n in range(1, N)]
    failures = []
    for n in range(1, N):
        r = hat[n].shift_up(1) - hat[n + 1] - hat[n].scale(u_hat[n]) - hat[n - 1].scale(v_hat[n])
        if not r.is_zero():
            failures.append(n)
    lamhat = None
    if factors.D1 is not None and factors.D2 is not None:
        from .shiftop import compose
        lamhat = compose(factors.D2, factors.D1) + ShiftOp.mult(c)
    return TransformedSeq(hat, u_hat, v_hat, lamhat, failures)


# -- completion -------------------------------------------------------------------------

def _unknowns(max_order: int, slack: int):
    return [(i, j) for i in range(1, max_order + 1) for j in range(i + slack + 1)]


def _equations(P: XPoly, n: int, unknowns) -> List[List[Fraction]]:
    """Rows of ``[L P]_m - mu [P]_m = 0`` (``m < n``) and ``[L P]_m = 0`` (``m > n``),
    where ``mu = [L P]_n`` is itself linear in the unknowns."""
    cols = []
    top = n
    for i, j in unknowns:
        col = P.derivative(i).shift_up(j)
        cols.append(col)
        top = max(top, col.degree)
    rows = []
    mu = [col[n] for col in cols]
    for m in range(top + 1):
        if m == n:
            continue
        if m < n:
            row = [col[m] - mu_k * P[m] for col, mu_k in zip(cols, mu)]
        else:
            row = [col[m] for col in cols]
        if any(row):
            rows.append(row)
    return rows


def _to_operator(vec, unknowns, max_order: int) -> DiffOp:
    coeffs = [[Fraction(0)] * (i + 1) for i in range(1, max_order + 1)]
    for (i, j), a in zip(unknowns, vec):
        row = coeffs[i - 1]
        if j >= len(row):
            row.extend([Fraction(0)] * (j + 1 - len(row)))
        row[j] = a
    while coeffs and not any(coeffs[-1]):
        coeffs.pop()
    return build_operator([XPoly(tuple(r)) for r in coeffs], quiet=True)


def satisfies_eigen_equation(L: DiffOp, P: XPoly) -> bool:
    LP = apply(L, P)
    n = P.degree
    mu = LP[n]
    return (LP - P.scale(mu)).is_zero()


def bispectral_completion(seq, max_order: int, slack: int = 0, holdout: int = 3
                          ) -> List[DiffOp]:
    """Basis of ``{sum_{i<=max_order} a_i(x) d^i : deg a_i <= i + slack}`` having every
    polynomial of ``seq`` as an eigenfunction.

    Solved on all but the last ``holdout`` indices and then checked on every index.
    """
    polys = list(seq.polys) if hasattr(seq, "polys") else list(seq)
    unknowns = _unknowns(max_order, slack)
    if len(polys) < len(unknowns) + 5:
        raise ValueError(f"need at least {len(unknowns) + 5} polynomials, got {len(polys)}")
    rows = []
    for n in range(len(polys) - holdout):
        rows.extend(_equations(polys[n], n, unknowns))
    basis = nullspace(rows, len(unknowns))
    if not basis:
        raise NoOperator(f"no operator of order <= {max_order} (slack {slack})")
    ops = []
    for vec in basis:
        lead = next(a for a in reversed(vec) if a != 0)
        ops.append(_to_operator([a / lead for a in vec], unknowns, max_order))
    for L in ops:
        bad = [n for n, P in enumerate(polys) if not satisfies_eigen_equation(L, P)]
        if bad:
            raise CompletionUnstable(f"{L} fails at indices {bad}")
    return ops
