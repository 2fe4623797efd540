"""Run both path constructions over seeded unit-column paths and tabulate the outcome.

    python scripts/sweep_methods.py --sizes 8 10 12 --seeds 5 > sweep.csv
"""

import argparse
import csv
import sys
import time

from resinv.generators import gen_unit_column_path
from resinv.pipelines import method_one, method_two, structural_check


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12])
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--target-c", type=float, default=0.2)
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--samples", type=int, default=500)
    args = p.parse_args(argv)

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["method", "n", "seed", "grid_points", "dim", "min_stretch", "target", "passed",
                  "seconds"])
    for n in args.sizes:
        for seed in range(args.seeds):
            path = gen_unit_column_path(n, seed=seed)
            t0 = time.perf_counter()
            rep = method_one(path, gamma=args.gamma, target_c=args.target_c,
                             samples=args.samples, seed=seed)
            ver = rep.verification
            out.writerow(["I", n, seed, len(rep.grid), rep.achieved_dim, f"{ver.min_stretch:.6f}",
                          f"{rep.target:.6f}", ver.passed, f"{time.perf_counter() - t0:.2f}"])

            t0 = time.perf_counter()
            rep2 = method_two(path, target_c=args.target_c, target_size=2 if n >= 12 else 1,
                              samples=args.samples, seed=seed)
            ver = rep2.verification
            ok = ver.passed and structural_check(rep2.output)[0] == 0.0
            out.writerow(["II", n, seed, len(rep2.grid), rep2.achieved_dim,
                          f"{ver.min_stretch:.6f}", f"{rep2.c:.6f}", ok,
                          f"{time.perf_counter() - t0:.2f}"])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
