"""Solve the local expansion symbolically and report timings and sizes.

    python3 scripts/symbolic_expansion.py --order 25 4 6 5
"""
import argparse
import sys
import time

from telesigma.curve import build_curve
from telesigma.expansion import homogeneity_audit, solve_x_series
from telesigma.semigroup import FIXTURES, semigroup


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("sequence", nargs="*", type=int)
    ap.add_argument("--order", type=int, default=25)
    ap.add_argument("--show", type=int, default=0, help="print this many leading coefficients of each series")
    args = ap.parse_args()

    curves = [tuple(args.sequence)] if args.sequence else list(FIXTURES)
    status = 0
    for a in curves:
        sg = semigroup(a)
        t = time.perf_counter()
        exp = solve_x_series(build_curve(sg, "symbolic"), args.order)
        solved = time.perf_counter() - t
        residual_ok = all(r.is_zero() for r in exp.equation_residuals().values())
        audit = homogeneity_audit(exp)
        c = exp.c_series()
        terms = sum(len(c.terms()) for x in exp.x_series for c in x.coeffs)
        print(f"{str(a):12s} N={args.order} solve {solved:6.2f}s  terms {terms:6d}  "
              f"residuals {'ok' if residual_ok else 'FAIL'}  homogeneity {audit.checked} checked, "
              f"{len(audit.failures)} failures  c_1..c_{len(c)}")
        for i, x in enumerate(exp.x_series[: sg.m], 1):
            if args.show:
                print(f"    x{i} = {x.truncate(x.valuation + args.show)}")
        status |= not (residual_ok and audit.ok)
    return status


if __name__ == "__main__":
    sys.exit(main())
