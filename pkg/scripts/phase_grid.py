"""Emergence map over certainty C and alignment A without feedback.

Runs one replicate per grid point and prints '#' where the window gain exceeds
1/2 and '.' elsewhere, next to the theory map ('+' where lam*alpha < Gamma).

    python scripts/phase_grid.py --alpha 0.1 --N 10 --duration 1e7
"""

import argparse

from bootcomm.experiment import ExperimentConfig, sweep
from bootcomm.society import SocietyConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=0.1)
    ap.add_argument("--N", type=int, default=10)
    ap.add_argument("--C", type=float, nargs="+", default=[0.05, 0.1, 0.2, 0.3, 0.5, 0.8])
    ap.add_argument("--A", type=float, nargs="+", default=[0.75, 0.8, 0.85, 0.9, 0.95, 1.0])
    ap.add_argument("--duration", type=float, default=1e7)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="results/phase_grid")
    args = ap.parse_args()

    base = SocietyConfig(N=args.N, M=55, S=11, lam=0.01, alpha=args.alpha, seed=1010)
    cfg = ExperimentConfig(society=base, duration=args.duration, cadence=args.duration / 100,
                           grid={"C": args.C, "A": args.A})
    rows = {(r["C"], r["A"]): r for r in sweep(cfg, jobs=args.jobs, out=args.out)}
    print("C \\ A  " + " ".join(f"{a:5g}" for a in args.A))
    for C in args.C:
        sim = "".join("#" if rows[C, A]["emerged"] else "." for A in args.A)
        th = "".join("+" if rows[C, A]["lambda_alpha"] < rows[C, A]["gamma"] else "."
                     for A in args.A)
        print(f"{C:<6g} simulated {sim}  theory {th}")


if __name__ == "__main__":
    main()
