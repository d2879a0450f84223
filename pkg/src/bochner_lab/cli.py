"""``bochner-lab`` command line.

Exit codes: 0 success, 1 mathematical verdict failure, 2 usage error.
Every JSON document carries ``"schema": 1`` and sorted keys.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from . import reproduce
from .catalog import FAMILIES, FamilySpec, InvalidSpec, family_operator
from .darboux import (AUTO, Breakdown, CompletionUnstable, NoOperator, ShapeError,
                      bispectral_completion, factor_lu, swap_and_transform)
from .diffop import (DiffOp, EigenCheckFailed, Resonance, eigen_sequence, operator_from_json,
                     operator_to_json)
from .parser import ParseError
from .recurrence import (DegreeTooHigh, NoFit, fmt_rational, reconstruct_table,
                         recurrence_table, table_to_csv, table_to_json)
from .shiftop import Mismatch, ad_condition_check, shiftop_from_table
from .symbolic import IdenticallyResonant, NotPolynomial, parameter_constraints, symbolic_b

SCHEMA = 1
COMMANDS = ("eigenpolys", "recur", "adcheck", "symbolic-b", "constraints", "darboux", "catalog",
            "verify-paper")


class UsageError(ValueError):
    pass


class VerdictFailure(Exception):
    """Carries a JSON payload for exit code 1."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("error", "failure"))
        self.payload = payload


MATH_ERRORS = (Mismatch, Breakdown, NoOperator, CompletionUnstable, Resonance, EigenCheckFailed,
               NoFit, DegreeTooHigh, IdenticallyResonant, NotPolynomial, ShapeError)


@dataclass
class RunConfig:
    command: str
    op: Optional[str] = None
    family: Optional[str] = None
    family_args: str = ""
    N: int = 20
    bindings: Dict[str, Fraction] = field(default_factory=dict)
    fmt: str = "json"
    case: Optional[str] = None
    reconstruct: bool = False
    jmax: int = 5
    j: int = 3
    linearize: bool = False
    c: Fraction = Fraction(0)
    h0: object = Fraction(1)
    complete_order: Optional[int] = None


# -- serialization ----------------------------------------------------------------------

def dumps(doc: dict) -> str:
    return json.dumps(dict(doc, schema=SCHEMA), sort_keys=True, indent=2)


def _error_payload(exc: Exception) -> dict:
    out = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("n", "m", "k", "power", "offset"):
        if hasattr(exc, attr):
            out[attr] = getattr(exc, attr)
    if isinstance(exc, Mismatch):
        out["difference"] = str(exc.difference)
    return out


def _rat(v) -> str:
    if isinstance(v, Fraction) or isinstance(v, int):
        return fmt_rational(v)
    return str(v)


# -- operator loading -------------------------------------------------------------------

def load_config_operator(cfg: RunConfig, concrete: bool = True) -> DiffOp:
    if bool(cfg.op) == bool(cfg.family):
        raise UsageError("give exactly one of --op FILE or --family NAME")
    try:
        if cfg.op:
            with open(cfg.op) as fh:
                spec = json.load(fh)
            L = operator_from_json(spec, cfg.bindings or None)
        else:
            L = family_operator(FamilySpec.parse(cfg.family, cfg.family_args))
            if cfg.bindings:
                L = L.subs(cfg.bindings)
    except (OSError, json.JSONDecodeError, ParseError, InvalidSpec, KeyError) as exc:
        raise UsageError(f"cannot load operator: {exc}") from None
    if concrete and L.parameters:
        raise UsageError(f"unbound parameters {', '.join(L.parameters)}; use --bind")
    return L


def _need_n(cfg: RunConfig):
    if cfg.N < 2:
        raise UsageError("N must be >= 2")


# -- commands ---------------------------------------------------------------------------

def cmd_eigenpolys(cfg: RunConfig) -> Tuple[int, str]:
    _need_n(cfg)
    L = load_config_operator(cfg)
    seq = eigen_sequence(L, cfg.N)
    doc = {"operator": str(L), "lambda": str(L.lambda_poly), "N": cfg.N,
           "polys": [str(p) for p in seq.polys]}
    return 0, dumps(doc)


def _table(cfg: RunConfig, L: DiffOp, reconstruct: bool):
    table = recurrence_table(eigen_sequence(L, cfg.N))
    if reconstruct:
        if not table.bounded:
            raise VerdictFailure({"error": "Unbounded",
                                  "witness": [list(w) for w in table.bandwidth.witness]})
        reconstruct_table(table)
    return table


def cmd_recur(cfg: RunConfig) -> Tuple[int, str]:
    _need_n(cfg)
    L = load_config_operator(cfg)
    table = _table(cfg, L, cfg.reconstruct)
    if cfg.fmt == "csv":
        return 0, table_to_csv(table)
    return 0, dumps(table_to_json(table))


def cmd_adcheck(cfg: RunConfig) -> Tuple[int, str]:
    _need_n(cfg)
    L = load_config_operator(cfg)
    table = _table(cfg, L, True)
    Lam = shiftop_from_table(table)
    cert = ad_condition_check(L, Lam, strict=False)
    doc = {"Lambda": str(Lam), "order": cert.order, "matches": cert.matches,
           "target": [str(t) for t in cert.target],
           "peeled": None if cert.peeled is None else [str(c) for c in cert.peeled]}
    if cert.mismatch is not None:
        doc["mismatch"] = _error_payload(cert.mismatch)
    return (0 if cert.matches else 1), dumps(doc)


def cmd_symbolic_b(cfg: RunConfig) -> Tuple[int, str]:
    if cfg.jmax < 0:
        raise UsageError("--jmax must be >= 0")
    L = load_config_operator(cfg, concrete=False)
    bs = symbolic_b(L, cfg.jmax)
    doc = {"operator": str(L), "b": {str(j): str(v) for j, v in bs.b.items()},
           "p": {str(k): str(v) for k, v in bs.p.items()}}
    return 0, dumps(doc)


def cmd_constraints(cfg: RunConfig) -> Tuple[int, str]:
    if cfg.j < 0:
        raise UsageError("--j must be >= 0")
    L = load_config_operator(cfg, concrete=False)
    b = symbolic_b(L, cfg.j).b[cfg.j]
    cons = parameter_constraints(b, linearize=cfg.linearize)
    doc = {"j": cfg.j, "linearize": cfg.linearize, "b": str(b),
           "constraints": [[c.power, str(c.linear if cfg.linearize else c.coefficient)]
                           for c in cons]}
    return 0, dumps(doc)


def cmd_darboux(cfg: RunConfig) -> Tuple[int, str]:
    _need_n(cfg)
    L = load_config_operator(cfg)
    # a few spare indices so the three-term table can be reconstructed reliably
    work = RunConfig(**{**cfg.__dict__, "N": cfg.N + 1})
    table = _table(work, L, True)
    if table.bandwidth != 1:
        raise VerdictFailure({"error": "ShapeError",
                              "message": f"bandwidth {table.bandwidth}; Darboux needs d = 1"})
    Lam = shiftop_from_table(table)
    seq = eigen_sequence(L, cfg.N)
    factors = factor_lu(Lam, cfg.c, cfg.h0, cfg.N)
    ts = swap_and_transform(factors, seq)
    doc = {
        "Lambda": str(Lam), "c": _rat(cfg.c), "h0_auto": factors.h0_auto,
        "h": [_rat(v) for v in factors.h], "f": [_rat(v) for v in factors.f],
        "h_closed": None if factors.h_closed is None else str(factors.h_closed),
        "f_closed": None if factors.f_closed is None else str(factors.f_closed),
        "factorization_certified": factors.certify(),
        "Lambda_hat": None if ts.lamhat is None else str(ts.lamhat),
        "u_hat": [_rat(v) for v in ts.u_hat],
        "v_hat": [None if v is None else _rat(v) for v in ts.v_hat],
        "transformed": [str(p) for p in ts.polys],
        "conjugation_failures": ts.failures,
    }
    code = 0 if ts.verified and doc["factorization_certified"] else 1
    if cfg.complete_order is not None:
        try:
            basis = bispectral_completion(ts.polys, cfg.complete_order)
            doc["completion"] = [str(op) for op in basis]
        except (NoOperator, CompletionUnstable) as exc:
            doc["completion"] = []
            doc["completion_error"] = _error_payload(exc)
            code = 1
        except ValueError as exc:  # too few polynomials for the unknowns
            raise UsageError(str(exc)) from None
    return code, dumps(doc)


def cmd_catalog(cfg: RunConfig) -> Tuple[int, str]:
    if not cfg.family:
        raise UsageError(f"--family is required; one of {', '.join(FAMILIES)}")
    try:
        spec = FamilySpec.parse(cfg.family, cfg.family_args)
        L = family_operator(spec)
    except InvalidSpec as exc:
        raise UsageError(str(exc)) from None
    doc = operator_to_json(L)
    doc["family"] = str(spec)
    return 0, dumps(doc)


def _threads() -> int:
    raw = os.environ.get("BOCHNER_LAB_THREADS", "")
    try:
        return max(1, int(raw)) if raw else (os.cpu_count() or 1)
    except ValueError:
        raise UsageError(f"BOCHNER_LAB_THREADS must be an integer, got {raw!r}") from None


def cmd_verify_paper(cfg: RunConfig) -> Tuple[int, str]:
    if cfg.case is not None and cfg.case not in reproduce.CASES:
        raise UsageError(f"unknown case {cfg.case!r}; choose from {', '.join(reproduce.CASES)}")
    names = [cfg.case] if cfg.case else sorted(reproduce.CASES)
    with ThreadPoolExecutor(max_workers=min(_threads(), len(names))) as pool:
        results = list(pool.map(reproduce.run_case, names))
    ok = all(r.passed for r in results)
    if cfg.fmt == "text":
        lines = []
        for r in results:
            lines.append(f"[{'PASS' if r.passed else 'FAIL'}] case {r.name}")
            if r.error:
                lines.append(f"    error: {r.error}")
            for c in r.checks:
                lines.append(f"    {c.status:4s}  {c.name}" + (f"  ({c.detail})" if c.detail else ""))
        return (0 if ok else 1), "\n".join(lines) + "\n"
    doc = {"passed": ok, "cases": {
        r.name: {"passed": r.passed, "error": r.error,
                 "checks": [{"name": c.name, "status": c.status, "detail": c.detail}
                            for c in r.checks]}
        for r in results}}
    return (0 if ok else 1), dumps(doc)


HANDLERS = {
    "eigenpolys": cmd_eigenpolys, "recur": cmd_recur, "adcheck": cmd_adcheck,
    "symbolic-b": cmd_symbolic_b, "constraints": cmd_constraints, "darboux": cmd_darboux,
    "catalog": cmd_catalog, "verify-paper": cmd_verify_paper,
}


def run(cfg: RunConfig) -> Tuple[int, str]:
    """Execute ``cfg``; returns ``(exit_code, output)``."""
    try:
        return HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        return 2, dumps({"error": "UsageError", "message": str(exc)})
    except VerdictFailure as exc:
        return 1, dumps(exc.payload)
    except MATH_ERRORS as exc:
        return 1, dumps(_error_payload(exc))


# -- argument parsing -------------------------------------------------------------------

def _bindings(text: str) -> Dict[str, Fraction]:
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected name=value, got {item!r}")
        try:
            out[key.strip()] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise argparse.ArgumentTypeError(f"bad rational {value!r}") from None
    return out


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from None


def _h0(text: str):
    return AUTO if text == AUTO else _fraction(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bochner-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def operator_args(sp, n_default=20):
        sp.add_argument("--op", help="operator-spec JSON file")
        sp.add_argument("--family", help=f"catalog family ({', '.join(FAMILIES)})")
        sp.add_argument("--args", dest="family_args", default="", help="family parameters k=3,a3=1")
        sp.add_argument("--bind", dest="bindings", type=_bindings, default={},
                        help="parameter values a=1,b=2/3")
        sp.add_argument("-n", "--N", dest="N", type=int, default=n_default)

    sp = sub.add_parser("eigenpolys", help="eigenpolynomials P_0..P_N")
    operator_args(sp)
    sp = sub.add_parser("recur", help="recurrence table x P_n = P_(n+1) + sum b_j P_(n-j)")
    operator_args(sp)
    sp.add_argument("--reconstruct", action="store_true")
    sp.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    sp = sub.add_parser("adcheck", help="ad-condition certificate")
    operator_args(sp, 30)
    sp = sub.add_parser("symbolic-b", help="symbolic b_j(n)")
    operator_args(sp)
    sp.add_argument("--jmax", type=int, default=5)
    sp = sub.add_parser("constraints", help="parameter constraints from b_j")
    operator_args(sp)
    sp.add_argument("--j", type=int, default=3)
    sp.add_argument("--linearize", action="store_true")
    sp = sub.add_parser("darboux", help="Darboux step and bispectral completion")
    operator_args(sp)
    sp.add_argument("--c", type=_fraction, default=Fraction(0))
    sp.add_argument("--h0", type=_h0, default=Fraction(1))
    sp.add_argument("--complete-order", type=int)
    sp = sub.add_parser("catalog", help="operator-spec JSON for a named family")
    sp.add_argument("--family", required=True)
    sp.add_argument("--args", dest="family_args", default="")
    sp = sub.add_parser("verify-paper", help="reproduction suite")
    sp.add_argument("--case", choices=sorted(reproduce.CASES))
    sp.add_argument("--format", dest="fmt", choices=("json", "text"), default="text")
    return p


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in ns.items() if k in fields})


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:  # argparse usage errors
        return 2 if exc.code else 0
    code, out = run(cfg)
    stream = sys.stdout if code != 2 else sys.stderr
    stream.write(out if out.endswith("\n") else out + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
