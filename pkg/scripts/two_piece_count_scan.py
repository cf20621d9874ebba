"""Largest gap count of f = {x + 1 on [0, 3/4), x - 1/2 on [3/4, 1)} over random (alpha, N).

Removing the hole [1/2, 1) from the value axis turns f into an affine copy of
the rotation x -> frac(x + 1/4) + 1/4, so at most three circle gaps plus the
one straddling the hole can appear.  The scan checks that empirically.
"""
import argparse
import random
from collections import Counter

import gmpy2

from gaplab.gaps import gap_report
from gaplab.periodic import pl
from gaplab.sampling import random_rational, random_unit
from gaplab.scalar import DEFAULT_CONTEXT as CTX

F = pl((0, "3/4", 1, 1), ("3/4", 1, 1, "-1/2"))


def main(argv=None):
    ap = argparse.ArgumentParser(description="gap-count histogram for the two-piece example")
    ap.add_argument("--draws", type=int, default=20000)
    ap.add_argument("--max-N", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    hist: Counter = Counter()
    best = None
    for _ in range(args.draws):
        alpha = random_rational(rng, 200) if rng.random() < 0.2 else random_unit(rng, CTX.precision_bits)
        N = rng.randint(1, args.max_N)
        r = gap_report(F, alpha, 0, N)
        hist[r.count] += 1
        if best is None or r.count > best[0]:
            best = (r.count, alpha, N)
    with CTX.working():
        pi16 = gmpy2.const_pi() / 16
    print("alpha = pi/16, N = 7:", gap_report(F, pi16, 0, 7).count)
    print("histogram:", dict(sorted(hist.items())))
    print(f"max {best[0]} at alpha = {float(best[1]):.12f}, N = {best[2]}")


if __name__ == "__main__":
    main()
