#!/usr/bin/env python3
"""Mutate every solved plan one step at a time and report the survivors.

Usage: python3 scripts/mutation_report.py [--instances N] [--out FILE]
"""
import argparse
import sys

from wernick.catalog import load_catalog
from wernick.kb import default_kb
from wernick.solver import run_one
from wernick.verifier import mutation_analysis


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=100)
    ap.add_argument("--out", help="write the report here as well")
    args = ap.parse_args()

    kb = default_kb()
    plans = [o.plan for o in (run_one(kb, e.problem()) for e in load_catalog()) if o.solved]
    text = mutation_analysis(plans, args.instances).text()
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
