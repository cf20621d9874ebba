"""Seeded sweep of every statement; prints one summary line each.

    python scripts/bound_sweep.py --draws 2000 --seed 1 --workers 4
"""
import argparse
import time

from gaplab.sampling import DEFAULT_MAX_N, SweepConfig, run_sweep, summarize
from gaplab.theorems import STATEMENTS


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--draws", type=int, default=500)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-N", type=int, default=None, help="cap on N (default: per statement)")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("statements", nargs="*", default=list(STATEMENTS))
    args = ap.parse_args(argv)

    print(f"{'statement':<18} {'draws':>6} {'max_N':>6} {'min':>4} {'max':>4} {'pass':>6} {'sec':>7}")
    for st in args.statements:
        cfg = SweepConfig(st, args.draws, args.seed, args.max_N, workers=args.workers)
        t = time.perf_counter()
        s = summarize(run_sweep(cfg))
        print(f"{st:<18} {s['draws']:>6} {args.max_N or DEFAULT_MAX_N[st]:>6} {s['min_observed']:>4} "
              f"{s['max_observed']:>4} {s['pass_rate']:>6.3f} {time.perf_counter() - t:>7.1f}")
        if s["failures"]:
            print(f"  violations at draws {s['failures'][:20]}")


if __name__ == "__main__":
    main()
