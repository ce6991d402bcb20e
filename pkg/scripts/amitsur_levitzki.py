"""Standard polynomials on k x k matrices.

For each l and k prints whether s_l is an identity (by exact expansion of the
generic matrices) and the largest residual seen on random complex tuples.
"""

import argparse
import time

import numpy as np

from ncseries.matrep import evaluate, is_identity
from ncseries.matrix_tuple import MatrixTuple
from ncseries.series import standard_identity


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l-max", type=int, default=5)
    ap.add_argument("--k-max", type=int, default=2)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'l':>2} {'k':>2} {'identity':>8} {'max residual':>13} {'seconds':>8}")
    for l in range(1, args.l_max + 1):
        s = standard_identity(l)
        for k in range(1, args.k_max + 1):
            t0 = time.perf_counter()
            exact = is_identity(s, k)
            worst = 0.0
            for _ in range(args.samples):
                M = MatrixTuple(rng.normal(size=(l, k, k)) + 1j * rng.normal(size=(l, k, k)))
                worst = max(worst, np.linalg.norm(evaluate(s, M).value, np.inf) / M.max_norm() ** l)
            print(f"{l:>2} {k:>2} {str(exact):>8} {worst:>13.3e} {time.perf_counter() - t0:>8.3f}")


if __name__ == "__main__":
    main()
