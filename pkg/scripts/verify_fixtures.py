"""Run every degenerate identity on the fixture curves and print a table.

    python3 scripts/verify_fixtures.py --max-n 6
"""
import argparse
import sys
import time

from telesigma.degenerate import degenerate_sigma, verify_all
from telesigma.semigroup import FIXTURES


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=None, help="largest number of points (default genus + 2, at most 7)")
    args = ap.parse_args()

    failed = 0
    for a in FIXTURES:
        sigma = degenerate_sigma(a)
        max_n = args.max_n or min(sigma.genus + 2, 7)
        t = time.perf_counter()
        results = verify_all(sigma, max_n=max_n)
        bad = [v for v in results if not v.ok]
        failed += len(bad)
        print(f"{str(a):12s} genus {sigma.genus}  {len(results) - len(bad)}/{len(results)} ok  {time.perf_counter() - t:6.2f}s")
        for v in bad:
            print(f"    FAIL {v.name} {v.params} {v.residual_monomials(3)}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
