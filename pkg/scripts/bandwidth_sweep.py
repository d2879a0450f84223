"""Bandwidth d of type 1 / Appell families for k = 2..kmax at several N.

    python3 scripts/bandwidth_sweep.py --kmax 5 --N 30 40
"""
import argparse
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from bochner_lab.catalog import FamilySpec, family_operator
from bochner_lab.diffop import eigen_sequence
from bochner_lab.recurrence import recurrence_table


@dataclass
class SweepConfig:
    kmax: int = 4
    Ns: List[int] = field(default_factory=lambda: [20, 40])
    trials: int = 2
    seed: int = 7


def random_coeffs(rng, k):
    out = {f"a{j}": Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for j in range(1, k + 1)}
    while out[f"a{k}"] == 0:
        out[f"a{k}"] = Fraction(rng.randint(1, 9))
    return out


def sweep(cfg: SweepConfig):
    rng = random.Random(cfg.seed)
    rows = []
    for k in range(2, cfg.kmax + 1):
        for _ in range(cfg.trials):
            a = random_coeffs(rng, k)
            for family in ("type1", "appell"):
                spec = FamilySpec.make(family, k=k, **a)
                L = family_operator(spec)
                for N in cfg.Ns:
                    t0 = time.perf_counter()
                    d = recurrence_table(eigen_sequence(L, N)).bandwidth
                    rows.append((str(spec), N, d, k - 1, time.perf_counter() - t0))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kmax", type=int, default=4)
    ap.add_argument("--N", dest="Ns", type=int, nargs="+", default=[20, 40])
    ap.add_argument("--trials", type=int, default=2)
    ap.add_argument("--seed", type=int, default=7)
    cfg = SweepConfig(**vars(ap.parse_args()))
    bad = 0
    for spec, N, d, want, secs in sweep(cfg):
        flag = "" if d == want else "   <-- differs from k - 1"
        bad += bool(flag)
        print(f"{spec:55s} N={N:3d} d={d!s:>10s} ({secs:.2f}s){flag}")
    print(f"{bad} deviations")


if __name__ == "__main__":
    main()
