#!/usr/bin/env python3
"""Survey trimmed short complexes against the closed-form prediction.

For each N in the requested range, draws seeded generic point sets in
P^1 x P^2, trims the resolution at (N-1, 0), and compares the stage
tables with the closed form.  Every shape also runs through the Euler
quadrant necessary check.  Records go to a JSONL file when --out is
given; the exit code is nonzero iff any comparison fails.
"""

import argparse
import json
import sys
import time

from vreslab.cli import derive_seed
from vreslab.points import random_points
from vreslab.vres import euler_quadrant_check, pair_vres, predicted_pair_shape


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmin", type=int, default=12)
    ap.add_argument("--nmax", type=int, default=40)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=2)
    ap.add_argument("--out", default=None, help="JSONL record path")
    args = ap.parse_args()

    sink = open(args.out, "a") if args.out else None
    mismatches = 0
    started = time.perf_counter()
    for N in range(args.nmin, args.nmax + 1):
        want = predicted_pair_shape(N)
        good = 0
        for trial in range(args.trials):
            seed = derive_seed(args.seed, N, trial)
            ps = random_points(1, 2, N, seed=seed, require_generic=True)
            shape = pair_vres(ps, (N - 1, 0))
            ok = shape == want
            euler = euler_quadrant_check(shape, N, 1, 2)
            if ok and euler:
                good += 1
            else:
                mismatches += 1
                print("MISMATCH N=%d trial=%d seed=%d" % (N, trial, seed))
            if sink:
                sink.write(json.dumps(
                    {"timestamp": time.time(), "N": N, "trial": trial,
                     "seed": seed, "match": ok, "euler": euler,
                     "rejections": ps.rejections}, sort_keys=True) + "\n")
        print("N=%2d %d/%d match" % (N, good, args.trials))
    if sink:
        sink.close()
    elapsed = time.perf_counter() - started
    total = (args.nmax - args.nmin + 1) * args.trials
    print("%d shapes in %.1fs, %d mismatches" % (total, elapsed, mismatches))
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
