"""Feedback regime: where the communicative state is reached inside the bistable band, N = 20 vs 40.

Sweeps alpha across the band between lam*alpha = 1/M and the saddle-node point
and reports the largest alpha at which the window gain exceeds 1/2. A smaller
value for the larger society means the band transition has moved toward the
lam*alpha < Gamma boundary.

    python scripts/feedback_band_shift.py --replicates 4 --out results/band
"""

import argparse

import numpy as np

from bootcomm.experiment import ExperimentConfig, sweep
from bootcomm.society import SocietyConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--M", type=int, default=24)
    ap.add_argument("--duration", type=float, default=4e5)
    ap.add_argument("--replicates", type=int, default=4)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="results/band_shift")
    args = ap.parse_args()

    M, S, lam = args.M, 12, 0.01
    lower = 1 / M / lam
    upper = (1 / M) * S * S / (4 * (S - 1)) / lam
    alphas = [float(a) for a in np.round(np.linspace(0.8 * lower, 1.05 * upper, 12), 3)]
    base = SocietyConfig(N=20, M=M, S=S, lam=lam, C=0.0, A=1.0, feedback=True, seed=8)
    cfg = ExperimentConfig(society=base, duration=args.duration, replicates=args.replicates,
                           grid={"N": [20, 40], "alpha": alphas})
    rows = sweep(cfg, jobs=args.jobs, out=args.out)
    print(f"band: alpha in ({lower:.3g}, {upper:.3g})")
    for N in (20, 40):
        mine = [r for r in rows if r["N"] == N]
        for r in mine:
            print(f"N={N}\talpha={r['alpha']:.3g}\tG={r['gain_window_mean']:.3f}\t{r['regime']}")
        reached = [r["alpha"] for r in mine if r["emerged"]]
        print(f"N={N}: largest alpha reaching G > 0.5: {max(reached) if reached else None}")


if __name__ == "__main__":
    main()
