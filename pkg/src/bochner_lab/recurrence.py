"""Recurrence coefficients of a concrete eigenpolynomial sequence.

``x P_n = P_{n+1} + sum_{j=0..n} b_j(n) P_{n-j}``.  The table is read off by
expanding ``x P_n - P_{n+1}`` in the basis ``P_0..P_n``; the bandwidth ``d``
is the largest ``j`` with a nonzero entry, provided it has stopped growing.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .diffop import EigenSeq, XPoly
from .exactnum import N as NVAR, MPoly, RatFn, ratfn_reduce
from .linalg import nullspace

__all__ = [
    "EigenSeq", "RecTable", "Unbounded", "DegreeTooHigh", "NoFit",
    "expand_in_eigenbasis", "recombine", "recurrence_table",
    "reconstruct_rational", "reconstruct_table", "table_to_csv", "table_to_json",
]


class DegreeTooHigh(ValueError):
    pass


class NoFit(ValueError):
    pass


@dataclass(frozen=True)
class Unbounded:
    """Largest nonzero ``j`` keeps growing; ``witness`` lists ``(n, max j)`` records."""

    witness: Tuple[Tuple[int, int], ...]

    def __str__(self) -> str:
        return "unbounded"


@dataclass
class RecTable:
    N: int
    rows: Tuple[Tuple[Fraction, ...], ...]
    bandwidth: Union[int, Unbounded]
    support: Tuple[Tuple[int, int], ...]
    reconstructed: Dict[int, RatFn] = field(default_factory=dict)

    def b(self, j: int, n: int) -> Fraction:
        if j > n:
            raise IndexError(f"b_{j}({n}) is outside the table (j > n)")
        return self.rows[n][j]

    def column(self, j: int) -> List[Tuple[int, Fraction]]:
        return [(n, self.rows[n][j]) for n in range(j, self.N)]

    @property
    def bounded(self) -> bool:
        return not isinstance(self.bandwidth, Unbounded)


def expand_in_eigenbasis(seq: EigenSeq, q: XPoly) -> List[Fraction]:
    """Coefficients ``c`` with ``q = sum_m c[m] P_m``; length ``deg q + 1``."""
    if q.degree > seq.N:
        raise DegreeTooHigh(f"deg q = {q.degree} exceeds N = {seq.N}")
    c = [Fraction(0)] * (q.degree + 1)
    for m in range(q.degree, -1, -1):
        cm = q[m]
        c[m] = cm
        if cm != 0:
            q = q - seq[m].scale(cm)
    return c


def recombine(seq: EigenSeq, c: Sequence) -> XPoly:
    out = XPoly()
    for m, cm in enumerate(c):
        if cm != 0:
            out = out + seq[m].scale(cm)
    return out


def _row(seq: EigenSeq, n: int) -> Tuple[Fraction, ...]:
    r = seq[n].shift_up(1) - seq[n + 1]
    c = expand_in_eigenbasis(seq, r)
    c = c + [Fraction(0)] * (n + 1 - len(c))
    return tuple(c[n - j] for j in range(n + 1))


def _bandwidth(rows) -> Union[int, Unbounded]:
    tops = [max((j for j, v in enumerate(r) if v != 0), default=-1) for r in rows]
    split = -(-2 * len(tops) // 3)
    early = max(tops[:split], default=-1)
    late = max(tops[split:], default=-1)
    if late > early:
        records, best = [], -1
        for n, t in enumerate(tops):
            if t > best:
                records.append((n, t))
                best = t
        return Unbounded(tuple(records))
    return max(early, 0)


def recurrence_table(seq: EigenSeq) -> RecTable:
    """Exact table for ``n = 0..N-1``.

    The bandwidth is declared from the first two thirds of the rows and must
    not be exceeded in the last third; otherwise it is :class:`Unbounded`.
    """
    if seq.N < 2:
        raise ValueError("recurrence_table needs N >= 2")
    rows = tuple(_row(seq, n) for n in range(seq.N))
    support = tuple((n, j) for n, r in enumerate(rows) for j, v in enumerate(r) if v != 0)
    return RecTable(seq.N, rows, _bandwidth(rows), support)


# -- rational reconstruction ------------------------------------------------------------

def _fit(samples, dn: int, dd: int) -> Optional[RatFn]:
    rows = []
    for n, v in samples:
        n = Fraction(n)
        rows.append([n ** i for i in range(dn + 1)] + [-v * n ** i for i in range(dd + 1)])
    for vec in nullspace(rows, dn + dd + 2):
        den = vec[dn + 1:]
        if any(den):
            num = vec[:dn + 1]
            nv = MPoly.var(NVAR)
            P = sum((c * nv ** i for i, c in enumerate(num) if c), MPoly.const(0))
            Q = sum((c * nv ** i for i, c in enumerate(den) if c), MPoly.const(0))
            return ratfn_reduce(P, Q)
    return None


def _agrees(r: RatFn, samples) -> bool:
    for n, v in samples:
        d = r.den.evaluate({NVAR: n})
        if d == 0 or r.num.evaluate({NVAR: n}) / d != v:
            return False
    return True


def reconstruct_rational(samples: Sequence[Tuple[int, Fraction]], degN: int, degD: int,
                         holdout: int = 3) -> RatFn:
    """Smallest-degree ``p(n)/q(n)`` through all ``samples``.

    Pairs ``(dn, dd)`` with ``dn <= degN``, ``dd <= degD`` are tried by
    increasing ``dn + dd``.  Each candidate is fitted on ``dn + dd + 2``
    samples and must reproduce every remaining sample, at least ``holdout``
    of them.
    """
    samples = [(int(n), Fraction(v)) for n, v in samples]
    if len(samples) < degN + degD + 2 + holdout:
        raise NoFit(f"need {degN + degD + 2 + holdout} samples, got {len(samples)}")
    return _scan(samples, degN, degD, degN + degD)


def _scan(samples, degN: int, degD: int, max_total: int) -> RatFn:
    for total in range(max_total + 1):
        for dd in range(min(total, degD) + 1):
            dn = total - dd
            if dn > degN:
                continue
            r = _fit(samples[:dn + dd + 2], dn, dd)
            if r is not None and _agrees(r, samples):
                return r
    raise NoFit(f"no rational function with degrees <= ({degN}, {degD}) fits")


def reconstruct_table(table: RecTable, holdout: int = 5) -> Dict[int, RatFn]:
    """Closed forms for ``b_0..b_d``; fills ``table.reconstructed``.

    Samples come from rows ``n >= d`` only: earlier rows see the truncated
    initial conditions and may deviate from the generic formula.  For each
    column the combined degree budget is whatever leaves ``holdout`` rows
    unused by the fit.
    """
    if not table.bounded:
        raise NoFit("bandwidth is unbounded")
    out = {}
    d = table.bandwidth
    for j in range(d + 1):
        col = [(n, Fraction(v)) for n, v in table.column(j) if n >= d]
        budget = len(col) - holdout - 2
        if budget < 0:
            raise NoFit(f"too few rows to reconstruct b_{j}")
        out[j] = _scan(col, budget, budget, budget)
    table.reconstructed = out
    return out


# -- export -----------------------------------------------------------------------------

def fmt_rational(v: Fraction) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def table_to_csv(table: RecTable) -> str:
    d = table.bandwidth if table.bounded else max((j for _, j in table.support), default=0)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n"] + [f"b{j}" for j in range(d + 1)])
    for n, r in enumerate(table.rows):
        w.writerow([n] + [fmt_rational(r[j]) if j <= n else "" for j in range(d + 1)])
    return buf.getvalue()


def table_to_json(table: RecTable) -> dict:
    return {
        "N": table.N,
        "bandwidth": table.bandwidth if table.bounded else "unbounded",
        "growth_witness": [list(w) for w in table.bandwidth.witness] if not table.bounded else [],
        "rows": [[fmt_rational(v) for v in r] for r in table.rows],
        "support": [list(s) for s in table.support],
        "reconstructed": {str(j): str(r) for j, r in sorted(table.reconstructed.items())},
    }
