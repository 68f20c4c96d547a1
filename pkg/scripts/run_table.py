#!/usr/bin/env python3
"""Reproduce the summary table of Einstein-metric counts.

Runs every decomposition n = k1+k2+k3 in the requested range through the
full pipeline (exact elimination with a certified numeric fallback) and
prints one row per decomposition with its isometry-class counts.

    python scripts/run_table.py --n-min 5 --n-max 9
"""

import argparse
import json
import sys

from einso.cli import Config
from einso.einstein import count_table
from einso.groebner import Budget


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-min", type=int, default=5)
    parser.add_argument("--n-max", type=int, default=9)
    parser.add_argument("--max-steps", type=int, default=250_000,
                        help="per-cell elimination budget before the numeric fallback")
    parser.add_argument("--starts", type=int, default=4000)
    parser.add_argument("--json", metavar="PATH", help="also write the rows as JSON")
    args = parser.parse_args()

    config = Config()
    cells = count_table(
        args.n_min, args.n_max,
        budget=Budget(args.max_steps, config.groebner_max_terms),
        cache=config.cache,
        starts=args.starts,
        seed=config.seed,
    )
    rows = []
    print(f"{'k':>12}  {'non-NR':>7}  {'NR':>4}  status")
    for cell in cells:
        rows.append({
            "k": list(cell.decomposition.k),
            "non_naturally_reductive": cell.non_naturally_reductive,
            "naturally_reductive": cell.naturally_reductive,
            "undecided": cell.undecided,
            "status": cell.status,
            "seconds": round(cell.seconds, 2),
        })
        print(f"{str(cell.decomposition.k):>12}  {cell.non_naturally_reductive:>7}"
              f"  {cell.naturally_reductive:>4}  {cell.status} ({cell.seconds:.1f}s)")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
