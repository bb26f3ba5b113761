"""Enumerate telescopic sequences and tabulate genus, conductor and partition shape.

    python3 scripts/semigroup_corpus.py --max-entry 20 --max-length 3 --csv corpus.csv
"""
import argparse
import csv
import sys
from collections import Counter

from telesigma.semigroup import frobenius, semigroup, sieve_gaps, telescopic_corpus


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-entry", type=int, default=20)
    ap.add_argument("--max-length", type=int, default=3)
    ap.add_argument("--csv", help="write one row per sequence")
    args = ap.parse_args()

    rows, genus_hist, mismatches = [], Counter(), 0
    for a in telescopic_corpus(args.max_entry, args.max_length):
        sg = semigroup(a)
        sieve = len(sieve_gaps(a))
        fr = frobenius(a)
        ok = sieve == sg.genus and fr.equality and sg.gaps[-1] == 2 * sg.genus - 1
        mismatches += not ok
        genus_hist[sg.genus] += 1
        rows.append((" ".join(map(str, a)), sg.genus, sieve, sg.gaps[-1], len(sg.partition), ok))

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["sequence", "genus", "sieve_gaps", "largest_gap", "partition_length", "ok"])
            w.writerows(rows)
    print(f"{len(rows)} telescopic sequences, {mismatches} mismatches")
    for g in sorted(genus_hist):
        print(f"  genus {g:3d}: {genus_hist[g]}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
