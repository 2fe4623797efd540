"""Rank of the low-norm adversarial matrix against the 4n/lambda^2 ceiling.

For each (n, lambda) prints the split n = d m + r, the rank, the operator
norm and the largest subset the selector returns.
"""

import argparse
import csv
import math
import sys

import numpy as np

from resinv.generators import adversarial_split, gen_adversarial
from resinv.linalg import operator_norm
from resinv.selection import select_restricted_invertible


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[9, 16, 25, 36, 64])
    p.add_argument("--target-c", type=float, default=0.05)
    args = p.parse_args(argv)

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["n", "lambda", "m", "d", "r", "rank", "norm", "ceiling", "selected"])
    for n in args.n:
        for lam in sorted({1.0, math.sqrt(2), 2.0, math.sqrt(n) / 2, math.sqrt(n)}):
            if not 1.0 <= lam <= math.sqrt(n):
                continue
            m, d, r = adversarial_split(n, lam)
            A = gen_adversarial(n, lam)
            sel = select_restricted_invertible(A, mode="best-effort", target_c=args.target_c)
            out.writerow([n, f"{lam:.4f}", m, d, r, int(np.linalg.matrix_rank(A)),
                          f"{operator_norm(A):.4f}", f"{4 * n / lam**2:.2f}", sel.size])


if __name__ == "__main__":
    main()
