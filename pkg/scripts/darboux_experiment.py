"""Darboux step on a classical three-term recurrence followed by a search for
a differential operator having the new polynomials as eigenfunctions.

    python3 scripts/darboux_experiment.py --alpha 1 --c 0 --h0 1 --max-order 6
"""
import argparse
from dataclasses import dataclass
from fractions import Fraction

from bochner_lab.catalog import FamilySpec, family_operator
from bochner_lab.darboux import (Breakdown, NoOperator, bispectral_completion, factor_lu,
                                 swap_and_transform)
from bochner_lab.diffop import eigen_sequence
from bochner_lab.recurrence import reconstruct_table, recurrence_table
from bochner_lab.shiftop import shiftop_from_table


@dataclass
class DarbouxConfig:
    family: str = "laguerre"
    alpha: Fraction = Fraction(1)
    c: Fraction = Fraction(0)
    h0: Fraction = Fraction(1)
    N: int = 30
    max_order: int = 6


def run(cfg: DarbouxConfig):
    params = {"alpha": cfg.alpha} if cfg.family in ("laguerre", "jacobi") else {}
    L = family_operator(FamilySpec.make(cfg.family, **params))
    seq = eigen_sequence(L, cfg.N + 1)
    table = recurrence_table(seq)
    reconstruct_table(table)
    Lam = shiftop_from_table(table)
    print("Lambda     =", Lam)
    try:
        fac = factor_lu(Lam, cfg.c, cfg.h0, cfg.N)
    except Breakdown as exc:
        print("breakdown:", exc)
        return
    print("h(n)       =", fac.h_closed, " f(n) =", fac.f_closed)
    ts = swap_and_transform(fac, seq)
    print("Lambda hat =", ts.lamhat, " verified:", ts.verified)
    polys = ts.polys[:cfg.N]
    for order in range(1, cfg.max_order + 1):
        try:
            ops = bispectral_completion(polys, order)
        except NoOperator:
            print(f"order <= {order}: none")
            continue
        except ValueError as exc:
            print(f"order <= {order}: {exc}")
            break
        print(f"order <= {order}: {len(ops)} operator(s)")
        for op in ops:
            print("   ", op)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="laguerre")
    ap.add_argument("--alpha", type=Fraction, default=Fraction(1))
    ap.add_argument("--c", type=Fraction, default=Fraction(0))
    ap.add_argument("--h0", type=Fraction, default=Fraction(1))
    ap.add_argument("--N", type=int, default=30)
    ap.add_argument("--max-order", dest="max_order", type=int, default=6)
    run(DarbouxConfig(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()
