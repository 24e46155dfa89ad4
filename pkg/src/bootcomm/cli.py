"""Command line entry point: simulate, sweep, theory, reproduce."""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ConfigError
from .experiment import load_config, run_experiment, sweep
from .presets import PRESETS, preset_config
from .theory import FEEDBACK, NO_FEEDBACK, classify_regime, dominant_count_pmf, threshold_gamma
from .theory import variability_estimate

THEORY_COLUMNS = ["mode", "M", "S", "lam", "alpha", "C", "A", "V", "gamma", "lambda_alpha",
                  "lambda_alpha_over_gamma", "x_c", "predicted_gain", "noncomm_unstable",
                  "comm_exists", "bistable", "regime"]
PMF_COLUMNS = ["S", "M", "D", "probability"]


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="experiment seed (replicate seeds derive from it)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--replicates", type=int)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--snapshot", action="store_true", help="write final-state snapshots")
    p.add_argument("--duration", type=float, help="override run length in time units")


def _override(config, args):
    if args.seed is not None:
        config = replace(config, society=replace(config.society, seed=args.seed))
    changes = {k: getattr(args, k) for k in ("replicates", "duration") if getattr(args, k)}
    if args.snapshot:
        changes["snapshot"] = True
    if args.duration:
        changes["cadence"] = None
    if getattr(args, "budget", None):
        changes["budget_steps"] = args.budget
    return replace(config, **changes) if changes else config


def _print_rows(rows, keys) -> None:
    print("\t".join(keys))
    for r in rows:
        print("\t".join(f"{r[k]:.4g}" if isinstance(r[k], float) else str(r[k]) for k in keys))


SUMMARY = ["point", "alpha", "C", "A", "M", "S", "N", "gain_window_mean", "gain_window_se",
           "dominant_count_mean", "regime", "predicted_gain"]


def cmd_simulate(args) -> None:
    config = _override(load_config(args.config), args)
    out = args.out or config.output_dir
    _print_rows(run_experiment(config, jobs=args.jobs, out=out), SUMMARY)
    print(f"wrote {out}")


def cmd_sweep(args) -> None:
    config = _override(load_config(args.config), args)
    out = args.out or config.output_dir
    _print_rows(sweep(config, jobs=args.jobs, out=out), SUMMARY)
    if args.plot:
        from .plots import gain_curve_svg

        gain_curve_svg(Path(out) / "sweep.csv", Path(out) / "sweep.svg")
    print(f"wrote {out}")


def cmd_reproduce(args) -> None:
    config = _override(preset_config(args.preset), args)
    out = args.out or config.output_dir
    _print_rows(sweep(config, jobs=args.jobs, out=out), SUMMARY)
    if args.plot:
        from .plots import plot_preset

        print(f"wrote {plot_preset(args.preset, out)}")
    print(f"wrote {out}")


def theory_rows(*, M: int, S: int, lam: float, alphas, C: float, A: float,
                feedback: bool) -> list[dict]:
    rows = []
    for alpha in alphas:
        la = lam * alpha
        if feedback:
            V = math.nan
            gamma = threshold_gamma(FEEDBACK, M=M)
        else:
            V = variability_estimate(lam, alpha, C, A, M)
            gamma = threshold_gamma(NO_FEEDBACK, M=M, C=C, A=A, V=V)
        rep = classify_regime(la, gamma, S)
        rows.append({
            "mode": FEEDBACK if feedback else NO_FEEDBACK, "M": M, "S": S, "lam": lam,
            "alpha": alpha, "C": C, "A": A, "V": V, "gamma": gamma, "lambda_alpha": la,
            "lambda_alpha_over_gamma": la / gamma if gamma > 0 else math.nan,
            "x_c": math.nan if rep.x_c is None else rep.x_c,
            "predicted_gain": math.nan if rep.predicted_gain is None else rep.predicted_gain,
            "noncomm_unstable": rep.noncomm_unstable, "comm_exists": rep.comm_exists,
            "bistable": rep.bistable, "regime": rep.label,
        })
    return rows


def cmd_theory(args) -> None:
    rows = theory_rows(M=args.M, S=args.S, lam=args.lam, alphas=args.alpha, C=args.C, A=args.A,
                       feedback=args.feedback)
    out = Path(args.out or "results/theory")
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "regime.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(THEORY_COLUMNS)
        w.writerows([r[c] for c in THEORY_COLUMNS] for r in rows)
    pmf = dominant_count_pmf(args.S, args.M)
    with open(out / "pmf.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PMF_COLUMNS)
        w.writerows([args.S, args.M, D, float(p)] for D, p in enumerate(pmf))
    _print_rows(rows, ["alpha", "gamma", "lambda_alpha_over_gamma", "regime", "predicted_gain"])
    print(f"wrote {out}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bootcomm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the replicates of one config file")
    p.add_argument("config")
    _common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run the [grid] of a config file")
    p.add_argument("config")
    _common(p)
    p.add_argument("--budget", type=int, help="maximum total interaction steps")
    p.add_argument("--plot", action="store_true", help="also write sweep.svg")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("theory", help="regime table and dominant-count law as CSV")
    p.add_argument("--M", type=int, default=55)
    p.add_argument("--S", type=int, default=11)
    p.add_argument("--lam", type=float, default=0.01)
    p.add_argument("--alpha", type=float, nargs="+", default=[0.01, 0.1, 1.0])
    p.add_argument("--C", type=float, default=0.1)
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--feedback", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("reproduce", help="run a figure preset")
    p.add_argument("preset", choices=sorted(PRESETS))
    _common(p)
    p.add_argument("--budget", type=int, help="maximum total interaction steps")
    p.add_argument("--plot", action="store_true", help="also write <preset>.svg")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
