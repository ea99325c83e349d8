"""Randomized check of the algebraic laws, with knobs for generator size.

    python scripts/law_check.py --cases 5000 --seed 3 --max-instance 6
"""

import argparse
import time

from dnml.generate import GenConfig
from dnml.laws import check_laws


def main():
    ap = argparse.ArgumentParser(description="check algebraic laws on random inputs")
    ap.add_argument("--cases", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-instance", type=int, default=GenConfig.max_instance)
    ap.add_argument("--max-narrative", type=int, default=GenConfig.max_narrative)
    args = ap.parse_args()

    config = GenConfig(max_instance=args.max_instance, max_narrative=args.max_narrative)
    t0 = time.perf_counter()
    reports = check_laws(args.cases, args.seed, config)
    elapsed = time.perf_counter() - t0

    width = max(len(r.name) for r in reports)
    for r in reports:
        status = "ok" if r.ok else f"FAILED on {len(r.failures)} cases, first seed {r.failures[0]}"
        print(f"{r.name:<{width}}  {r.cases:>6}  {status}")
    print(f"{len(reports)} laws in {elapsed:.1f}s")
    return 0 if all(r.ok for r in reports) else 1


if __name__ == "__main__":
    raise SystemExit(main())
