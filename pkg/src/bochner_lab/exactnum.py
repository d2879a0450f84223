"""Exact arithmetic kernel.

Sparse multivariate polynomials over Q (:class:`MPoly`) and reduced rational
functions (:class:`RatFn`).  The variable ``n`` indexes polynomial sequences;
every other variable is a free parameter such as ``a31`` or ``a11``.

Polynomials are stored as sympy sparse ring elements (``QQ[...]`` with grlex
order), which gives exact gmpy-backed coefficients and a multivariate gcd.
Contexts are canonical tuples of variable names: ``n`` first, then ``x``,
then the remaining names in natural order.  Binary operations align two
contexts on the union of their names.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring as _sympy_ring

N = "n"

Rational = Fraction
Scalar = Union[int, Fraction]
Exponents = Tuple[int, ...]


class ZeroDenominator(ZeroDivisionError):
    """Raised when a rational function is built with a zero denominator."""


def _natural_key(name: str):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


def canonical_context(names: Iterable[str]) -> Tuple[str, ...]:
    names = set(names)
    head = [v for v in (N, "x") if v in names]
    rest = sorted(names.difference(head), key=_natural_key)
    return tuple(head + rest)


@lru_cache(maxsize=None)
def _ring(context: Tuple[str, ...]):
    return _sympy_ring(",".join(context), QQ, grlex)[0] if context else _sympy_ring((), QQ, grlex)[0]


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _to_qq(c: Scalar):
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _lift(p, src: Tuple[str, ...], dst: Tuple[str, ...]):
    if src == dst:
        return p
    R = _ring(dst)
    index = [dst.index(v) for v in src]
    width = len(dst)
    terms = {}
    for exps, c in p.items():
        e = [0] * width
        for i, k in zip(index, exps):
            e[i] = k
        terms[tuple(e)] = c
    return R.from_dict(terms) if terms else R.zero


class MPoly:
    """Immutable sparse polynomial in ``n`` and named parameters over Q."""

    __slots__ = ("_ctx", "_p")

    def __init__(self, terms: Mapping[Exponents, Scalar] | None = None,
                 context: Iterable[str] = ()):
        given = tuple(context)
        ctx = canonical_context(given)
        if len(set(given)) != len(given):
            raise ValueError(f"duplicate variables in context {given!r}")
        R = _ring(ctx)
        data = {}
        for exps, c in (terms or {}).items():
            if len(exps) != len(given):
                raise ValueError("exponent vector does not match context length")
            if c == 0:
                continue
            e = [0] * len(ctx)
            for name, k in zip(given, exps):
                if k < 0:
                    raise ValueError("negative exponent")
                e[ctx.index(name)] = int(k)
            e = tuple(e)
            data[e] = data.get(e, QQ(0)) + _to_qq(c)
        data = {e: c for e, c in data.items() if c}
        self._ctx = ctx
        self._p = R.from_dict(data) if data else R.zero

    @classmethod
    def _wrap(cls, ctx: Tuple[str, ...], p) -> "MPoly":
        obj = cls.__new__(cls)
        obj._ctx = ctx
        obj._p = p
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "MPoly":
        R = _ring(())
        return cls._wrap((), R(_to_qq(c)) if c else R.zero)

    @classmethod
    def var(cls, name: str) -> "MPoly":
        ctx = (name,)
        return cls._wrap(ctx, _ring(ctx).gens[0])

    @classmethod
    def coerce(cls, value) -> "MPoly":
        if isinstance(value, MPoly):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        raise TypeError(f"cannot convert {type(value).__name__} to MPoly")

    # -- structure -----------------------------------------------------------------

    @property
    def context(self) -> Tuple[str, ...]:
        return self._ctx

    @property
    def variables(self) -> Tuple[str, ...]:
        """Variables that actually occur with a positive exponent."""
        used = set()
        for exps in self._p.keys():
            used.update(v for v, k in zip(self._ctx, exps) if k)
        return canonical_context(used)

    def terms(self) -> Dict[Exponents, Fraction]:
        return {e: _to_fraction(c) for e, c in self._p.items()}

    def named_terms(self) -> Dict[Tuple[Tuple[str, int], ...], Fraction]:
        """Terms keyed by ``((var, exp), ...)`` with zero exponents dropped."""
        out = {}
        for e, c in self._p.items():
            key = tuple((v, k) for v, k in zip(self._ctx, e) if k)
            out[key] = _to_fraction(c)
        return out

    def __len__(self) -> int:
        return len(self._p)

    def is_zero(self) -> bool:
        return not self._p

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._p.keys())

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return _to_fraction(self._p.coeff(1)) if self._p else Fraction(0)

    def constant_term(self) -> Fraction:
        zero = (0,) * len(self._ctx)
        return _to_fraction(self._p.get(zero, QQ(0)))

    def degree(self, var: str = N) -> int:
        """Degree in ``var``; -1 for the zero polynomial."""
        if self.is_zero():
            return -1
        if var not in self._ctx:
            return 0
        i = self._ctx.index(var)
        return max(e[i] for e in self._p.keys())

    def total_degree(self, among: Iterable[str] | None = None) -> int:
        if self.is_zero():
            return -1
        idx = range(len(self._ctx)) if among is None else \
            [self._ctx.index(v) for v in among if v in self._ctx]
        return max(sum(e[i] for i in idx) for e in self._p.keys())

    def leading_coefficient(self) -> Fraction:
        """Leading coefficient under grlex with the canonical variable order."""
        return _to_fraction(self._p.LC) if self._p else Fraction(0)

    def coefficients_in(self, var: str) -> Dict[int, "MPoly"]:
        """Split into ``{power: coefficient}`` with respect to ``var``."""
        if var not in self._ctx:
            return {0: self} if not self.is_zero() else {}
        i = self._ctx.index(var)
        rest = self._ctx[:i] + self._ctx[i + 1:]
        R = _ring(rest)
        buckets: Dict[int, dict] = {}
        for e, c in self._p.items():
            buckets.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: MPoly._wrap(rest, R.from_dict(d)) for k, d in sorted(buckets.items())}

    # -- alignment -----------------------------------------------------------------

    def aligned(self, context: Tuple[str, ...]) -> "MPoly":
        ctx = canonical_context(set(context) | set(self._ctx))
        return MPoly._wrap(ctx, _lift(self._p, self._ctx, ctx))

    @staticmethod
    def _pair(a: "MPoly", b: "MPoly"):
        if a._ctx == b._ctx:
            return a._ctx, a._p, b._p
        ctx = canonical_context(set(a._ctx) | set(b._ctx))
        return ctx, _lift(a._p, a._ctx, ctx), _lift(b._p, b._ctx, ctx)

    # -- arithmetic ----------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, RatFn):
            return NotImplemented
        try:
            other = MPoly.coerce(other)
        except TypeError:
            return NotImplemented
        ctx, p, q = MPoly._pair(self, other)
        return MPoly._wrap(ctx, p + q)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._wrap(self._ctx, -self._p)

    def __sub__(self, other):
        if isinstance(other, RatFn):
            return NotImplemented
        try:
            other = MPoly.coerce(other)
        except TypeError:
            return NotImplemented
        ctx, p, q = MPoly._pair(self, other)
        return MPoly._wrap(ctx, p - q)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, RatFn):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            return MPoly._wrap(self._ctx, self._p * _to_qq(other)) if other else \
                MPoly._wrap(self._ctx, self._p.ring.zero)
        if not isinstance(other, MPoly):
            return NotImplemented
        ctx, p, q = MPoly._pair(self, other)
        return MPoly._wrap(ctx, p * q)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("MPoly exponents must be nonnegative integers")
        if k == 0:
            return MPoly._wrap(self._ctx, self._p.ring.one)
        return MPoly._wrap(self._ctx, self._p ** k)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return MPoly._wrap(self._ctx, self._p * _to_qq(1 / Fraction(other)))
        if isinstance(other, MPoly):
            return ratfn_reduce(self, other)
        if isinstance(other, RatFn):
            return RatFn(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        return ratfn_reduce(MPoly.coerce(other), self)

    def exquo(self, other: "MPoly") -> "MPoly":
        """Exact quotient; raises ``ValueError`` if ``other`` does not divide."""
        ctx, p, q = MPoly._pair(self, MPoly.coerce(other))
        quo, rem = p.div(q)
        if rem:
            raise ValueError("inexact division")
        return MPoly._wrap(ctx, quo)

    def gcd(self, other: "MPoly") -> "MPoly":
        ctx, p, q = MPoly._pair(self, MPoly.coerce(other))
        return MPoly._wrap(ctx, p.gcd(q))

    # -- comparison ----------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, RatFn):
            return other == self
        if not isinstance(other, MPoly):
            return NotImplemented
        _, p, q = MPoly._pair(self, other)
        return p == q

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash(frozenset(self.named_terms().items()))

    def __bool__(self):
        return not self.is_zero()

    # -- substitution ----------------------------------------------------------------

    def subs(self, values: Mapping[str, Union[Scalar, "MPoly"]]) -> "MPoly":
        """Substitute rationals or polynomials for variables (simultaneously)."""
        result = self
        polys = {k: v for k, v in values.items() if isinstance(v, MPoly) and k in self._ctx}
        scalars = {k: v for k, v in values.items() if not isinstance(v, MPoly) and k in self._ctx}
        if scalars:
            R = result._p.ring
            p = result._p
            for name, v in scalars.items():
                p = p.subs(R.gens[result._ctx.index(name)], _to_qq(v))
            result = MPoly._wrap(result._ctx, p)
        if polys:
            if len(polys) > 1 and any(set(v.variables) & set(polys) for v in polys.values()):
                raise ValueError("simultaneous polynomial substitution with overlapping variables")
            ctx = canonical_context(set(result._ctx).union(*(v._ctx for v in polys.values())))
            p = _lift(result._p, result._ctx, ctx)
            R = _ring(ctx)
            for name, v in polys.items():
                p = p.compose(R.gens[ctx.index(name)], _lift(v._p, v._ctx, ctx))
            result = MPoly._wrap(ctx, p)
        return result

    def shift(self, var: str, k) -> "MPoly":
        """Replace ``var`` by ``var + k``."""
        if not k or var not in self._ctx or self.degree(var) <= 0:
            return self
        R = self._p.ring
        g = R.gens[self._ctx.index(var)]
        return MPoly._wrap(self._ctx, self._p.compose(g, g + _to_qq(k)))

    def evaluate(self, values: Mapping[str, Scalar] | None = None, **kw) -> Fraction:
        vals = dict(values or {}, **kw)
        missing = set(self.variables) - set(vals)
        if missing:
            raise ValueError(f"no value for {sorted(missing)}")
        out = Fraction(0)
        for key, c in self.named_terms().items():
            t = c
            for v, k in key:
                t *= Fraction(vals[v]) ** k
            out += t
        return out

    # -- printing ------------------------------------------------------------------

    def __str__(self) -> str:
        return format_terms(
            [(tuple((v, k) for v, k in zip(self._ctx, e) if k), _to_fraction(c))
             for e, c in self._p.terms()])

    def __repr__(self) -> str:
        return f"MPoly('{self}')"


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_terms(terms) -> str:
    """Render ``[(((var, exp), ...), coeff), ...]`` in the textual grammar."""
    if not terms:
        return "0"
    parts = []
    for i, (mono, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        factors = [v if k == 1 else f"{v}^{k}" for v, k in mono]
        if not factors:
            body = _fmt_rational(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_fmt_rational(a)] + factors)
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


def _primitive_factor(p) -> "QQ":
    """Scalar s with s*p having coprime integer coefficients and positive LC."""
    num_g = 0
    den_l = 1
    from math import gcd
    for c in p.values():
        f = _to_fraction(c)
        num_g = gcd(num_g, f.numerator)
        den_l = den_l * f.denominator // gcd(den_l, f.denominator)
    s = Fraction(den_l, num_g)
    if p.LC < 0:
        s = -s
    return _to_qq(s)


class RatFn:
    """Reduced quotient of two :class:`MPoly` values.

    The denominator has coprime integer coefficients and a positive leading
    coefficient under grlex, so equal functions have equal representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        r = ratfn_reduce(MPoly.coerce(num), MPoly.coerce(den))
        self.num = r.num
        self.den = r.den

    @classmethod
    def _make(cls, num: MPoly, den: MPoly) -> "RatFn":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def coerce(cls, value) -> "RatFn":
        if isinstance(value, RatFn):
            return value
        p = MPoly.coerce(value)
        return cls._make(p, MPoly._wrap(p._ctx, p._p.ring.one))

    @property
    def context(self) -> Tuple[str, ...]:
        return self.num._ctx

    @property
    def variables(self) -> Tuple[str, ...]:
        return canonical_context(set(self.num.variables) | set(self.den.variables))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> MPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num / self.den.constant_value()

    def is_constant(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    # -- arithmetic ----------------------------------------------------------------

    def __add__(self, other):
        try:
            o = RatFn.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return ratfn_reduce(self.num + o.num, self.den)
        return ratfn_reduce(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFn._make(-self.num, self.den)

    def __sub__(self, other):
        try:
            o = RatFn.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatFn.coerce(0)
            return RatFn._make(self.num * other, self.den)
        try:
            o = RatFn.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return RatFn.coerce(0)
        # cross-cancel before multiplying keeps intermediate sizes down
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        return ratfn_reduce(self.num.exquo(g1) * o.num.exquo(g2),
                            self.den.exquo(g2) * o.den.exquo(g1))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFn.coerce(other)
        if o.is_zero():
            raise ZeroDenominator("division by the zero rational function")
        return self * RatFn._make(o.den, o.num)

    def __rtruediv__(self, other):
        return RatFn.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFn.coerce(1) / (self ** -k)
        return RatFn._make(self.num ** k, self.den ** k)

    def __eq__(self, other):
        try:
            o = RatFn.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den == 1:
            return hash(self.num)
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    # -- substitution ----------------------------------------------------------------

    def shift(self, var: str, k) -> "RatFn":
        # a shift keeps coprimality and the grlex leading coefficient
        return RatFn._make(self.num.shift(var, k), self.den.shift(var, k))

    def subs(self, values: Mapping[str, Union[Scalar, MPoly]]) -> "RatFn":
        return ratfn_reduce(self.num.subs(values), self.den.subs(values))

    def evaluate(self, values: Mapping[str, Scalar] | None = None, **kw) -> Fraction:
        d = self.den.evaluate(values, **kw)
        if d == 0:
            raise ZeroDivisionError(f"pole of {self} at {dict(values or {}, **kw)}")
        return self.num.evaluate(values, **kw) / d

    def __call__(self, n) -> Fraction:
        return self.evaluate({N: n})

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFn('{self}')"


def ratfn_reduce(num: MPoly, den: MPoly) -> RatFn:
    """Reduce ``num/den``: cancel the gcd and normalize the denominator."""
    num = MPoly.coerce(num)
    den = MPoly.coerce(den)
    if den.is_zero():
        raise ZeroDenominator(f"zero denominator for {num}")
    ctx, p, q = MPoly._pair(num, den)
    if not p:
        R = _ring(ctx)
        return RatFn._make(MPoly._wrap(ctx, R.zero), MPoly._wrap(ctx, R.one))
    if q.is_ground:
        c = q.LC
        return RatFn._make(MPoly._wrap(ctx, p.quo_ground(c)), MPoly._wrap(ctx, q.ring.one))
    g = p.gcd(q)
    if not g.is_ground:
        p = p.exquo(g)
        q = q.exquo(g)
    s = _primitive_factor(q)
    return RatFn._make(MPoly._wrap(ctx, p * s), MPoly._wrap(ctx, q * s))


# -- helpers used across the package --------------------------------------------------

Value = Union[int, Fraction, MPoly, RatFn]


def shift_n(p, k: int):
    """Replace ``n`` by ``n + k`` in a polynomial or rational function."""
    if isinstance(p, (int, Fraction)):
        return p
    return p.shift(N, k)


def delta(p, times: int = 1):
    """Forward difference in ``n``: ``p(n+1) - p(n)``, iterated."""
    for _ in range(times):
        p = shift_n(p, 1) - p
    return p


def n_var() -> MPoly:
    return MPoly.var(N)


def falling(p, i: int):
    """Falling factorial ``p (p-1) ... (p-i+1)``; ``(p)_0 = 1``."""
    out = MPoly.const(1) if isinstance(p, MPoly) else Fraction(1)
    for t in range(i):
        out = out * (p - t)
    return out


def is_zero(v) -> bool:
    return v == 0


def as_ratfn(v) -> RatFn:
    return RatFn.coerce(v)


def simplify_value(v):
    """Collapse a RatFn/MPoly that is a constant to a Fraction."""
    if isinstance(v, RatFn):
        if v.is_constant():
            return v.constant_value()
        if v.is_polynomial():
            return v.as_poly()
        return v
    if isinstance(v, MPoly) and v.is_constant():
        return v.constant_value()
    return v


def to_fraction(v) -> Fraction:
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, (MPoly, RatFn)):
        return v.constant_value()
    raise TypeError(f"not a rational constant: {v!r}")
