"""Build a divergence witness at a tuple and show its tails inside and at the boundary."""

import argparse
import json

import numpy as np

from ncseries.matrep import divergence_witness, tail_profile
from ncseries.matrix_tuple import MatrixTuple


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("tuple", nargs="?", help="JSON matrix tuple (default: E12, E21)")
    ap.add_argument("--length", type=int, default=12)
    ap.add_argument("--degree", type=int, default=40)
    ap.add_argument("--shrink", type=float, default=0.5, help="inner point is shrink * M")
    args = ap.parse_args()

    if args.tuple:
        with open(args.tuple) as fh:
            M = MatrixTuple.from_dict(json.load(fh))
    else:
        E12 = np.array([[0.0, 1.0], [0.0, 0.0]])
        M = MatrixTuple([E12, E12.T])
    w = divergence_witness(M, args.length)
    at = tail_profile(w, M, args.degree)
    inside = tail_profile(w, M.scale(args.shrink), args.degree)
    print(f"{'degree':>6} {'|f_d(M)|':>12} {'|f_d(sM)|':>12}")
    for d in range(1, args.degree + 1):
        print(f"{d:>6} {at[d]:>12.4e} {inside[d]:>12.4e}")


if __name__ == "__main__":
    main()
