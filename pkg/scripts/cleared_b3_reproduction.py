"""Cleared b_3 of the quadratic-lambda shape under both cascade conventions.

Prints the leading n-coefficients and the m_k list used in the classification
argument, then the reproduction report for every case.
"""
import argparse
from dataclasses import dataclass

from bochner_lab.reproduce import CASES, b3_cleared, m_coefficients, run_case


@dataclass
class ClearedB3Config:
    a31: int = 1
    a30: int = 2
    a20: int = 3
    a10: int = 7
    show_cases: bool = True


def leading(cascade, **fixed):
    try:
        p = b3_cleared(cascade, **fixed).coefficients_in("n")
    except ValueError as exc:
        return str(exc)
    top = max(p)
    return f"degree {top}, leading {p[top]}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--no-cases", dest="show_cases", action="store_false")
    cfg = ClearedB3Config(**vars(ap.parse_args()))
    base = dict(a31=cfg.a31, a30=cfg.a30, a21=0, a20=cfg.a20, a10=cfg.a10)
    for cascade in ("unshifted", "exact"):
        print(f"[{cascade}]")
        print("  a32 = 1:", leading(cascade, a32=1, **base))
        print("  a32 = 0:", leading(cascade, a32=0, **base))
    print("m_k with a32 = a31 = a21 = 0, a30 = 1 (unshifted):")
    for k, m in sorted(m_coefficients().items(), reverse=True):
        print(f"  m{k} = {m}")
    if cfg.show_cases:
        for name in CASES:
            r = run_case(name)
            print(f"case {name}: {'PASS' if r.passed else 'FAIL'}")
            for c in r.checks:
                print(f"    {c.status:4s} {c.name}")


if __name__ == "__main__":
    main()
