"""Static SVG figures from the CSV outputs. Needs matplotlib."""

from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path


def _read(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def gain_curve_svg(aggregate_csv, path, x: str = "lambda_alpha") -> None:
    """Measured window gain (points) and predicted gain (line) per (M, N, S) series."""
    plt = _pyplot()
    groups = defaultdict(list)
    for r in _read(aggregate_csv):
        groups[(r["M"], r["N"], r["S"])].append(r)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for (M, N, S), rows in sorted(groups.items()):
        rows.sort(key=lambda r: float(r[x]))
        xs = [float(r[x]) for r in rows]
        line = ax.plot(xs, [float(r["predicted_gain"]) for r in rows], "-")[0]
        ax.errorbar(xs, [float(r["gain_window_mean"]) for r in rows],
                    yerr=[float(r["gain_window_se"] or "nan") for r in rows], fmt="o",
                    color=line.get_color(), label=f"M={M} N={N} S={S}", ms=4)
    ax.set_xscale("log")
    ax.set_xlabel(x)
    ax.set_ylabel("G")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def emergence_svg(aggregate_csv, path) -> None:
    """C x A lattice per alpha: filled where the measured gain exceeds 1/2."""
    plt = _pyplot()
    rows = _read(aggregate_csv)
    alphas = sorted({float(r["alpha"]) for r in rows})
    fig, axes = plt.subplots(1, len(alphas), figsize=(3.2 * len(alphas), 3), squeeze=False)
    for ax, a in zip(axes[0], alphas):
        mine = [r for r in rows if float(r["alpha"]) == a]
        hit = [r for r in mine if r["emerged"] == "True"]
        ax.scatter([float(r["C"]) for r in mine], [float(r["A"]) for r in mine], s=12,
                   facecolors="none", edgecolors="grey")
        ax.scatter([float(r["C"]) for r in hit], [float(r["A"]) for r in hit], s=24, color="k")
        ax.set_title(f"alpha={a:g}")
        ax.set_xlabel("C")
        ax.set_ylabel("A")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def dominance_svg(dominance_csv, path) -> None:
    """Empirical distribution of dominant-signal counts against the random-assignment law."""
    plt = _pyplot()
    groups = defaultdict(list)
    for r in _read(dominance_csv):
        groups[(r["M"], r["alpha"])].append(r)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for (M, a), rows in sorted(groups.items()):
        D = [int(r["D"]) for r in rows]
        line = ax.plot(D, [float(r["predicted"]) for r in rows], "-")[0]
        ax.plot(D, [float(r["empirical"]) for r in rows], "o", color=line.get_color(),
                label=f"M={M} alpha={a}", ms=4)
    ax.set_xlabel("D")
    ax.set_ylabel("P(D)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def plot_preset(name: str, outdir) -> Path:
    outdir = Path(outdir)
    target = outdir / f"{name}.svg"
    if name in ("fig5", "fig6"):
        dominance_svg(outdir / "dominance.csv", target)
    elif name == "fig8":
        gain_curve_svg(outdir / "sweep.csv", target, x="lambda_alpha")
    elif name == "fig9":
        gain_curve_svg(outdir / "sweep.csv", target, x="lambda_alpha_over_gamma")
    else:
        emergence_svg(outdir / "sweep.csv", target)
    return target
