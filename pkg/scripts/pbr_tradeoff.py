#!/usr/bin/env python3
"""Trace the overlap no-go bound and its precision-versus-overlap inverse.

Sweeps the overlap mass q of the two single-system distributions, reporting
the smallest achievable worst forbidden-outcome probability (the exact LP
optimum, with the simplex-grid descent as an independent upper bound), then
inverts the curve: for each experimental tolerance eps, the largest overlap
an ontological model could keep while matching every forbidden outcome to
within eps.
"""

import argparse
import sys

from microcanon import pbr


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q-steps", type=int, default=10,
                    help="number of overlap values between 0 and 1")
    ap.add_argument("--resolution", type=int, default=50,
                    help="simplex grid resolution for the descent check")
    ap.add_argument("--eps-grid", default="0,0.001,0.01,0.0625,0.25",
                    help="comma-separated ascending tolerances")
    args = ap.parse_args()

    print("q,min_forbidden_lp,min_forbidden_grid,quadratic_bound")
    for j in range(args.q_steps + 1):
        q = j / args.q_steps
        lp = pbr.min_forbidden_probability(q, method="lp")
        grid = pbr.min_forbidden_probability(q, resolution=args.resolution,
                                             method="grid")
        print(f"{q:.3f},{lp:.9f},{grid:.9f},{q * q / 4:.9f}")

    eps_grid = [float(x) for x in args.eps_grid.split(",")]
    print()
    print("eps,q_max")
    for eps, q_max in pbr.epsilon_overlap_tradeoff(eps_grid):
        print(f"{eps:.6g},{q_max:.9f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
