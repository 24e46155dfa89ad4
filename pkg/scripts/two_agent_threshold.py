"""Two fully aligned agents with two signals: does the majority signal grow?

Integrates the deterministic two-agent equations from a small majority lead and
compares the sign of the change in mean frequency with 8 C eps^2 > lam alpha.
"""

import argparse

import numpy as np

from bootcomm.theory import integrate_two_agent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--C", type=float, default=0.5)
    ap.add_argument("--lam", type=float, default=0.01)
    ap.add_argument("--M", type=int, default=10)
    ap.add_argument("--lead", type=float, default=0.01)
    ap.add_argument("--horizon", type=float, default=10.0)
    args = ap.parse_args()

    eps_grid = np.array([0.02, 0.05, 0.1, 0.15, 0.2])
    la_grid = np.array([1e-4, 3e-3, 2e-2, 6e-2, 0.2])
    print("eps \\ lam*alpha  " + "  ".join(f"{la:7.0e}" for la in la_grid))
    for eps in eps_grid:
        cells = []
        for la in la_grid:
            start = 0.5 + args.lead
            _, pp, pm = integrate_two_agent(start + eps, start - eps, args.C, args.lam,
                                            la / args.lam, args.M, args.horizon)
            grew = 0.5 * (pp[-1] + pm[-1]) > start
            predicted = 8 * args.C * eps**2 > la
            cells.append(("grow" if grew else "fall") + ("" if grew == predicted else "!"))
        print(f"{eps:<16g} " + "  ".join(f"{c:>7}" for c in cells))
    print("'!' marks disagreement with 8 C eps^2 > lam alpha")


if __name__ == "__main__":
    main()
