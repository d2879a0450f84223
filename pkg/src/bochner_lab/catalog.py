"""Named operator families and reference recurrence coefficients."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .diffop import DiffOp, WeylOp, XPoly, build_operator
from .exactnum import N, MPoly, RatFn, shift_n

CLASSICAL = ("hermite", "laguerre", "jacobi", "bessel")
CONJECTURAL = ("type1", "type2", "appell", "cubicpoint")
FAMILIES = CLASSICAL + CONJECTURAL


class InvalidSpec(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    """``name`` plus rational parameters.

    Parameter keys: laguerre ``alpha``; jacobi ``alpha, beta``; type1/appell
    ``k, a1..ak``; type2 ``l, a0..a{l-1}, q1..qr``; cubicpoint ``p, nu, mu``.
    """

    name: str
    params: Tuple[Tuple[str, Fraction], ...] = ()

    @classmethod
    def make(cls, name: str, **params) -> "FamilySpec":
        return cls(name, tuple(sorted((k, Fraction(v)) for k, v in params.items())))

    @classmethod
    def parse(cls, name: str, args: str = "") -> "FamilySpec":
        """``FamilySpec.parse("type1", "k=3,a3=1")``."""
        params = {}
        for item in filter(None, (s.strip() for s in args.split(","))):
            key, sep, value = item.partition("=")
            if not sep:
                raise InvalidSpec(f"expected key=value, got {item!r}")
            try:
                params[key.strip()] = Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                raise InvalidSpec(f"bad rational {value!r} for {key}") from None
        return cls.make(name, **params)

    def get(self, key: str, default=None) -> Optional[Fraction]:
        return dict(self.params).get(key, default)

    def __str__(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name}({inner})"


def _p(v) -> XPoly:
    return XPoly(tuple(v))


def _int_param(spec: FamilySpec, key: str, lo: int = 1) -> int:
    v = spec.get(key)
    if v is None or v.denominator != 1 or v < lo:
        raise InvalidSpec(f"{spec.name} needs an integer {key} >= {lo}")
    return int(v)


def classical_family(spec: FamilySpec) -> DiffOp:
    """Order-2 operators normalized so that ``lambda`` has positive leading coefficient."""
    name = spec.name
    if name == "hermite":
        return build_operator([_p([0, 1]), _p([-1])])
    if name == "laguerre":
        a = spec.get("alpha", Fraction(0))
        return build_operator([_p([-a - 1, 1]), _p([0, -1])])
    if name == "jacobi":
        a, b = spec.get("alpha", Fraction(0)), spec.get("beta", Fraction(0))
        return build_operator([_p([a - b, a + b + 2]), _p([-1, 0, 1])])
    if name == "bessel":
        return build_operator([_p([2, 2]), _p([0, 0, 1])])
    raise InvalidSpec(f"{name} is not a classical family")


# -- Weyl algebra composition -----------------------------------------------------------

def weyl_compose(A: WeylOp, B: WeylOp) -> WeylOp:
    """``(a d^i)(b d^j) = a sum_t C(i,t) b^(t) d^(i+j-t)``."""
    size = len(A.coeffs) + len(B.coeffs) - 1
    out = [XPoly() for _ in range(max(size, 0))]
    for i, a in enumerate(A.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(B.coeffs):
            if b.is_zero():
                continue
            for t in range(min(i, b.degree) + 1):
                out[i + j - t] = out[i + j - t] + a * b.derivative(t).scale(comb(i, t))
    return WeylOp(tuple(out))


def weyl_add(A: WeylOp, B: WeylOp) -> WeylOp:
    k = max(len(A.coeffs), len(B.coeffs))
    get = lambda W, i: W.coeffs[i] if i < len(W.coeffs) else XPoly()
    return WeylOp(tuple(get(A, i) + get(B, i) for i in range(k)))


def weyl_scale(A: WeylOp, c) -> WeylOp:
    return WeylOp(tuple(q.scale(c) for q in A.coeffs))


def _to_diffop(W: WeylOp) -> DiffOp:
    cs = list(W.coeffs)
    if cs and not cs[0].is_zero():
        raise InvalidSpec("operator has an order-0 term")
    cs = cs[1:]
    while cs and cs[-1].is_zero():
        cs.pop()
    return build_operator(cs, quiet=True)


EULER = WeylOp((XPoly(), _p([0, 1])))  # x d


def conjecture_family(spec: FamilySpec) -> DiffOp:
    name = spec.name
    if name in ("type1", "appell"):
        k = _int_param(spec, "k")
        a = [spec.get(f"a{j}", Fraction(0)) for j in range(1, k + 1)]
        if a[-1] == 0:
            raise InvalidSpec(f"{name} needs a{k} != 0")
        cs = []
        for j, aj in enumerate(a, 1):
            shift = j - 1 if name == "type1" else 0
            q = XPoly.monomial(shift, aj)
            if j == 1:
                q = q + _p([0, 1])
            cs.append(q)
        return build_operator(cs, quiet=True)
    if name == "type2":
        l = _int_param(spec, "l")
        a = [spec.get(f"a{m}", Fraction(0)) for m in range(l)]
        if a[-1] == 0:
            raise InvalidSpec(f"type2 needs a{l - 1} != 0")
        qs = {int(key[1:]): v for key, v in spec.params if key[0] == "q" and key[1:].isdigit()}
        if 0 in qs and qs[0] != 0:
            raise InvalidSpec("q must have zero constant term")
        qs = {r: v for r, v in qs.items() if r > 0 and v != 0}
        if not qs:
            raise InvalidSpec("type2 needs a nonzero polynomial q (keys q1, q2, ...)")
        deg_q = max(qs)
        k = spec.get("k")
        if k is not None and int(k) != l * deg_q:
            raise InvalidSpec(f"k = {k} but l * deg q = {l * deg_q}")
        inner = WeylOp((_p([1]),))
        euler_power = WeylOp((_p([1]),))
        poly = WeylOp((XPoly(),))
        for m in range(l):
            poly = weyl_add(poly, weyl_scale(euler_power, a[m]))
            euler_power = weyl_compose(euler_power, EULER)
        G = weyl_compose(poly, WeylOp((XPoly(), _p([1]))))
        # q'(G) G = sum_r r q_r G^r
        total = EULER
        Gr = inner
        for r in range(1, deg_q + 1):
            Gr = weyl_compose(Gr, G)
            if r in qs:
                total = weyl_add(total, weyl_scale(Gr, r * qs[r]))
        return _to_diffop(total)
    if name == "cubicpoint":
        p = spec.get("p", Fraction(0))
        nu, mu = spec.get("nu", Fraction(0)), spec.get("mu", Fraction(0))
        shift = _p([-p, 1])
        return build_operator([shift.scale(mu), (shift * shift).scale(nu),
                               (shift * shift * shift).scale(6)], quiet=True)
    raise InvalidSpec(f"{name} is not a conjectural family")


def family_operator(spec: FamilySpec) -> DiffOp:
    if spec.name in CLASSICAL:
        return classical_family(spec)
    if spec.name in CONJECTURAL:
        return conjecture_family(spec)
    raise InvalidSpec(f"unknown family {spec.name!r}; choose from {', '.join(FAMILIES)}")


def catalog_pairs() -> List[FamilySpec]:
    """Representative members used for duality and bandwidth sweeps."""
    mk = FamilySpec.make
    return [
        mk("hermite"), mk("laguerre", alpha=1), mk("laguerre", alpha=Fraction(1, 2)),
        mk("jacobi", alpha=1, beta=2), mk("bessel"),
        mk("type1", k=2, a1=1, a2=2), mk("type1", k=3, a1=1, a2=2, a3=3),
        mk("type1", k=4, a1=1, a2=-1, a3=2, a4=1),
        mk("appell", k=2, a1=1, a2=2), mk("appell", k=3, a1=1, a2=2, a3=3),
        mk("appell", k=4, a1=0, a2=1, a3=-1, a4=2),
        mk("type2", l=2, a0=1, a1=2, q1=1, q2=1),
        mk("cubicpoint", p=1, nu=2, mu=3),
    ]


# -- reference recurrences --------------------------------------------------------------

def _sym(spec: FamilySpec, key: str, symbolic: bool):
    if symbolic:
        return MPoly.var(key)
    return spec.get(key, Fraction(0))


def expected_recurrence(spec: Optional[FamilySpec] = None, family: str = "",
                        symbolic: bool = False) -> Dict[int, RatFn]:
    """Reference closed forms of ``b_0, b_1, b_2`` for order-3 type 1 and Appell.

    With ``symbolic`` the coefficients ``a1, a2, a3`` stay as variables.
    """
    name = spec.name if spec is not None else family
    if spec is not None and spec.get("k") not in (None, 3):
        raise InvalidSpec("reference forms exist for k = 3 only")
    spec = spec or FamilySpec(name)
    a1, a2, a3 = (_sym(spec, f"a{j}", symbolic) for j in (1, 2, 3))
    n = MPoly.var(N)
    if name == "type1":
        b0 = -(a1 + 2 * (n - 1) * a2 + 3 * (n - 1) * (n - 2) * a3)
        b1 = (n - 1) * (a2 + (3 * n - 6) * a3) * (a1 + (n - 2) * a2 + (n - 2) * (n - 3) * a3)
        b2 = -((n - 1) * (n - 2) * a3 * (a1 + (n - 3) * a2 + (n - 3) * (n - 4) * a3)
               * (a1 + (n - 2) * a2 + (n - 2) * (n - 3) * a3))
    elif name == "appell":
        b0 = -a1 * n ** 0 if isinstance(a1, MPoly) else MPoly.const(-a1)
        b1 = -a2 * (n - 1)
        b2 = -a3 * (n - 1) * (n - 2)
    else:
        raise InvalidSpec("expected_recurrence covers type1 and appell")
    return {0: RatFn.coerce(b0), 1: RatFn.coerce(b1), 2: RatFn.coerce(b2)}


@dataclass
class ShiftComparison:
    """``matches[s]`` is true when ``extracted b_j(n) = printed b_j(n + s)`` for all ``j``."""

    matches: Dict[int, bool]
    per_coefficient: Dict[int, Dict[int, bool]] = field(default_factory=dict)

    @property
    def verdict(self) -> Optional[int]:
        hits = [s for s, ok in sorted(self.matches.items()) if ok]
        return hits[0] if len(hits) == 1 else None


def compare_with_printed(extracted: Mapping[int, RatFn], printed: Mapping[int, RatFn],
                         shifts: Sequence[int] = (-1, 0, 1)) -> ShiftComparison:
    per = {}
    for s in shifts:
        per[s] = {j: RatFn.coerce(extracted.get(j, 0)) == shift_n(RatFn.coerce(p), s)
                  for j, p in printed.items()}
    return ShiftComparison({s: all(v.values()) for s, v in per.items()}, per)
