#!/usr/bin/env python3
"""Generator-layer prediction trials over a range of point counts.

Draws seeded generic point sets in P^1 x P^2 and checks that the
support and values of the first Betti layer match the prediction read
off the sign pattern of the difference matrix.  Genericity rejections
during sampling are counted per N.  Exit code is nonzero iff any trial
fails.
"""

import argparse
import json
import sys
import time

from vreslab.betti import mrc_check
from vreslab.cli import derive_seed
from vreslab.points import random_points


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmin", type=int, default=2)
    ap.add_argument("--nmax", type=int, default=25)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default=None, help="JSONL record path")
    args = ap.parse_args()

    sink = open(args.out, "a") if args.out else None
    failures = 0
    started = time.perf_counter()
    for N in range(args.nmin, args.nmax + 1):
        good = 0
        rejections = 0
        for trial in range(args.trials):
            seed = derive_seed(args.seed, N, trial)
            ps = random_points(1, 2, N, seed=seed, require_generic=True)
            rejections += ps.rejections
            rep = mrc_check(ps)
            if rep.passed:
                good += 1
            else:
                failures += 1
                print("FAIL N=%d trial=%d seed=%d mismatches=%s"
                      % (N, trial, seed, rep.mismatches))
            if sink:
                sink.write(json.dumps(
                    {"timestamp": time.time(), "N": N, "trial": trial,
                     "seed": seed, "passed": rep.passed,
                     "rejections": ps.rejections}, sort_keys=True) + "\n")
        print("N=%2d %d/%d pass, %d resampled draws"
              % (N, good, args.trials, rejections))
    if sink:
        sink.close()
    elapsed = time.perf_counter() - started
    total = (args.nmax - args.nmin + 1) * args.trials
    print("%d trials in %.1fs, %d failures" % (total, elapsed, failures))
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
