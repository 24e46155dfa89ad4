"""No-feedback gain against the scaled mutation rate lam*alpha/Gamma, for several (C, A).

alpha is chosen per point so that lam*alpha/Gamma hits each target ratio, with
Gamma computed from the estimated variability. Prints measured window gain next
to the predicted gain at the communicative fixed point.

    python scripts/gain_collapse.py --S 11 --ratios 0.1 0.3 0.5 0.8 --duration 4e6
"""

import argparse
import time

from bootcomm.experiment import replicate_seed
from bootcomm.society import SocietyConfig, init_society, run
from bootcomm.theory import NO_FEEDBACK, classify_regime, threshold_gamma


def alpha_for_ratio(C, A, ratio, lam, M):
    alpha = 0.1
    for _ in range(50):
        alpha = ratio * threshold_gamma(NO_FEEDBACK, M=M, C=C, A=A, lam=lam, alpha=alpha) / lam
    return alpha


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--S", type=int, default=11)
    ap.add_argument("--M", type=int, default=55)
    ap.add_argument("--N", type=int, default=20)
    ap.add_argument("--pairs", type=float, nargs="+", default=[0.05, 0.98, 0.05, 1.0, 0.1, 1.0],
                    help="flattened (C, A) pairs")
    ap.add_argument("--ratios", type=float, nargs="+", default=[0.1, 0.3, 0.5])
    ap.add_argument("--duration", type=float, default=4e6)
    ap.add_argument("--seed", type=int, default=55)
    args = ap.parse_args()

    lam = 0.01
    pairs = list(zip(args.pairs[::2], args.pairs[1::2]))
    print("C\tA\tratio\talpha\tgamma\tG_measured\tG_predicted\tV_final\tseconds")
    for k, (C, A) in enumerate(pairs):
        for j, ratio in enumerate(args.ratios):
            alpha = alpha_for_ratio(C, A, ratio, lam, args.M)
            gamma = threshold_gamma(NO_FEEDBACK, M=args.M, C=C, A=A, lam=lam, alpha=alpha)
            rep = classify_regime(lam * alpha, gamma, args.S)
            cfg = SocietyConfig(N=args.N, M=args.M, S=args.S, alpha=alpha, lam=lam, C=C, A=A,
                                seed=replicate_seed(args.seed, 100 * k + j))
            t0 = time.perf_counter()
            series = run(init_society(cfg), args.duration, cadence=args.duration / 100)
            pred = rep.predicted_gain if rep.predicted_gain is not None else float("nan")
            print(f"{C}\t{A}\t{ratio}\t{alpha:.4g}\t{gamma:.4g}\t{series[-1].gain_window:.3f}\t"
                  f"{pred:.3f}\t{series[-1].variability:.3f}\t{time.perf_counter() - t0:.0f}",
                  flush=True)


if __name__ == "__main__":
    main()
