"""The series sum_l s_l(x y, x y^2, ..., x y^l).

Every summand of index l >= 4 vanishes on 2 x 2 matrices, so on M_2 the series
is a polynomial, while the root test on its absolute majorant stays bounded
away from 0.  Prints the majorant estimate at each summand degree and which
degrees survive the generic 2 x 2 substitution.
"""

import argparse
import time

from ncseries.matrep import phi
from ncseries.series import majorant_radius, substituted_degree, substituted_standard_sum


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l-max", type=int, default=8)
    ap.add_argument("--phi-l-max", type=int, default=6)
    args = ap.parse_args()

    print(f"{'l':>2} {'degree':>6} {'terms':>7} {'majorant radius':>16}")
    for l in range(1, args.l_max + 1):
        D = sum(substituted_degree(l))
        f = substituted_standard_sum(D)
        print(f"{l:>2} {D:>6} {len(f.homogeneous_component(D)):>7} {majorant_radius(f).radius:>16.6f}")

    D = sum(substituted_degree(args.phi_l_max))
    t0 = time.perf_counter()
    p = phi(substituted_standard_sum(D), 2)
    alive = [d for d in range(D + 1) if not p.homogeneous(d).is_zero()]
    print(f"nonzero degrees of phi at k=2 up to {D}: {alive} ({time.perf_counter() - t0:.2f} s)")


if __name__ == "__main__":
    main()
