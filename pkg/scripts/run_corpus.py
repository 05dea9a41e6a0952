#!/usr/bin/env python3
"""Solve and verify the whole catalog; compare solved counts per status.

Usage: python3 scripts/run_corpus.py [--instances N] [--jobs N] [--out DIR]
"""
import argparse
import sys

from wernick.catalog import STATUSES, load_catalog
from wernick.kb import default_kb
from wernick.solver import solve_corpus
from wernick.verifier import verify

# solved counts reported for the original system, by status
REPORTED = {"S": 58, "U": 0}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=100)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    entries = load_catalog()
    summary = solve_corpus(default_kb(), [e.problem() for e in entries], args.jobs)
    failed = []
    for o in summary.outcomes:
        if o.solved and not verify(o.plan, o.problem, args.instances).ok:
            failed.append(o.problem.id)
    print(f"{'status':8} {'total':>5} {'solved':>6} {'reported':>8}")
    for st in STATUSES:
        print(f"{st:8} {summary.count(st):5} {summary.count(st, True):6} {REPORTED.get(st, '-'):>8}")
    unsolved = [o.problem.id for o in summary.outcomes if o.problem.status == "S" and not o.solved]
    print(f"unsolved S: {' '.join(map(str, unsolved))}")
    print(f"max clean length: {summary.max_clean_len()}")
    print(f"verification failures: {failed or 'none'}")
    return 1 if failed or summary.discrepancies else 0


if __name__ == "__main__":
    sys.exit(main())
