"""Joint spectral radius bounds on a few classic tuples and on random ones."""

import argparse
import time

import numpy as np

from ncseries.jsr import jsr_estimate
from ncseries.matrix_tuple import MatrixTuple

E12 = np.array([[0.0, 1.0], [0.0, 0.0]])
A = np.array([[1.0, 1.0], [0.0, 1.0]])

CLASSIC = {
    "E12, E21": [E12, E12.T],
    "E12": [E12],
    "scalars 1, 2i": [np.eye(1), 2j * np.eye(1)],
    "shears (golden)": [A, A.T],
    "rotation, scaled shear": [np.array([[0.0, -1.0], [1.0, 0.0]]), 0.5 * A],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tol", type=float, default=1e-6)
    ap.add_argument("--max-depth", type=int, default=20)
    ap.add_argument("--random", type=int, default=5, help="number of random 2-tuples of 3x3 matrices")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    cases = dict(CLASSIC)
    for i in range(args.random):
        cases[f"random #{i}"] = list(rng.normal(size=(2, 3, 3)) / 3)
    print(f"{'tuple':<24} {'lower':>10} {'upper':>10} {'depth':>5} {'status':<13} {'seconds':>7}")
    for name, mats in cases.items():
        t0 = time.perf_counter()
        b = jsr_estimate(MatrixTuple(mats), args.tol, args.max_depth)
        print(f"{name:<24} {b.lower:>10.6f} {b.upper:>10.6f} {b.depth:>5} {b.status:<13} {time.perf_counter() - t0:>7.3f}")


if __name__ == "__main__":
    main()
