"""Experiment configuration, replicate runner, parameter sweeps and file output.

Config files are TOML with three tables::

    [experiment]            # duration, cadence, replicates, output_dir, preset, ...
    [society]               # any SocietyConfig field
    [grid]                  # optional lists over alpha, C, A, M, S, N

Every run writes a ``manifest.json`` holding the fully resolved config; feeding
its ``config`` entry back through :func:`config_from_dict` re-runs the
experiment bit for bit.
"""

from __future__ import annotations

import csv
import hashlib
import itertools
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError
from .metrics import METRICS_COLUMNS, window_average
from .society import SocietyConfig, SocietyState, init_society, run, steps_for
from .theory import FEEDBACK, NO_FEEDBACK, classify_regime, dominant_count_pmf, threshold_gamma

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

GRID_KEYS = ("alpha", "C", "A", "M", "S", "N")
DEFAULT_BUDGET_STEPS = 10**11
SNAPSHOT_FORMAT = "bootcomm-snapshot/1"

REPLICATE_COLUMNS = ["point", "replicate", "seed", "status", "gain_window", "variability_window",
                     "dominant_count", "final_time"]
AGGREGATE_COLUMNS = [
    "point", *GRID_KEYS, "lam", "feedback", "replicates_ok",
    "gain_window_mean", "gain_window_se", "variability_mean", "variability_se",
    "dominant_count_mean", "dominant_count_se",
    "lambda_alpha", "gamma", "lambda_alpha_over_gamma", "regime", "predicted_gain", "emerged",
]
DOMINANCE_COLUMNS = ["point", "M", "S", "alpha", "D", "count", "empirical", "predicted"]
INTERACTION_COLUMNS = ["signaller", "receiver", "topic", "signal", "interpretation", "stored"]


@dataclass(frozen=True)
class ExperimentConfig:
    society: SocietyConfig = field(default_factory=SocietyConfig)
    duration: float = 1e4
    cadence: float | None = None
    replicates: int = 1
    output_dir: str = "results"
    preset: str | None = None
    grid: dict = field(default_factory=dict)
    snapshot: bool = False
    log_interactions: bool = False
    blind_success_samples: int = 0
    budget_steps: int = DEFAULT_BUDGET_STEPS

    def __post_init__(self):
        object.__setattr__(self, "grid", {k: tuple(v) for k, v in self.grid.items()})
        problems = []
        if not self.duration > 0:
            problems.append("duration must be positive")
        if self.cadence is not None and not self.cadence > 0:
            problems.append("cadence must be positive")
        if self.replicates < 1:
            problems.append("replicates must be at least 1")
        if self.blind_success_samples < 0:
            problems.append("blind_success_samples must be non-negative")
        for key, values in self.grid.items():
            if key not in GRID_KEYS:
                problems.append(f"grid key {key!r} not in {GRID_KEYS}")
            elif not values:
                problems.append(f"grid {key} must be a nonempty list")
        if problems:
            raise ConfigError("invalid experiment config: " + "; ".join(problems))
        for point in self.points():
            replace(self.society, **point)  # validates every grid point up front

    @property
    def resolved_cadence(self) -> float:
        return self.cadence if self.cadence is not None else self.duration / 100

    def points(self) -> list[dict]:
        """Grid points in row-major order of the grid keys; one empty point without a grid."""
        keys = list(self.grid)
        return [dict(zip(keys, combo)) for combo in itertools.product(*self.grid.values())]

    def required_steps(self) -> int:
        per_point = [steps_for(self.duration, p.get("N", self.society.N)) for p in self.points()]
        return sum(per_point) * self.replicates

    def to_dict(self) -> dict:
        exp = {f.name: getattr(self, f.name) for f in fields(self)
               if f.name not in ("society", "grid") and getattr(self, f.name) is not None}
        exp["cadence"] = self.resolved_cadence
        out = {"experiment": exp, "society": self.society.to_dict()}
        if self.grid:
            out["grid"] = {k: list(v) for k, v in self.grid.items()}
        return out


# -- parsing ----------------------------------------------------------------------

_EXPERIMENT_TYPES = {
    "duration": float, "cadence": float, "replicates": int, "output_dir": str, "preset": str,
    "snapshot": bool, "log_interactions": bool, "blind_success_samples": int, "budget_steps": int,
}
_SOCIETY_TYPES = {
    "N": int, "M": int, "S": int, "alpha": float, "lam": float, "C": float, "A": float,
    "feedback": bool, "network": object, "seed": int,
}


def _coerce(section: str, key: str, value, kind):
    where = f"{section}.{key}"
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{where} must be true or false")
    elif kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where} must be an integer")
    elif kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where} must be a number")
        value = float(value)
    elif kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{where} must be a string")
    return value


def _section(doc: dict, name: str, types: dict) -> dict:
    raw = doc.get(name, {})
    if not isinstance(raw, dict):
        raise ConfigError(f"[{name}] must be a table")
    out = {}
    for key, value in raw.items():
        if key not in types:
            raise ConfigError(f"unknown key {key!r} in [{name}]")
        out[key] = _coerce(name, key, value, types[key])
    return out


def config_from_dict(doc: dict) -> ExperimentConfig:
    """Build a config from the nested mapping used by TOML files and manifests."""
    unknown = set(doc) - {"experiment", "society", "grid"}
    if unknown:
        raise ConfigError(f"unknown table(s): {', '.join(sorted(unknown))}")
    exp = _section(doc, "experiment", _EXPERIMENT_TYPES)
    soc = _section(doc, "society", _SOCIETY_TYPES)
    grid = doc.get("grid", {})
    if not isinstance(grid, dict):
        raise ConfigError("[grid] must be a table")
    clean_grid = {}
    for key, values in grid.items():
        if key not in GRID_KEYS:
            raise ConfigError(f"unknown key {key!r} in [grid]")
        if not isinstance(values, list):
            raise ConfigError(f"grid.{key} must be a list")
        kind = _SOCIETY_TYPES[key]
        clean_grid[key] = [_coerce("grid", key, v, kind) for v in values]
    society = SocietyConfig(**soc)
    return ExperimentConfig(society=society, grid=clean_grid, **exp)


def load_config(path) -> ExperimentConfig:
    """Read a TOML experiment file; a ``preset`` supplies every society and grid value."""
    from .presets import preset_dict

    text = Path(path).read_text()
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line, col = getattr(exc, "lineno", None), getattr(exc, "colno", None)
        if line is None:
            found = re.search(r"line (\d+), column (\d+)", str(exc))
            line, col = found.groups() if found else ("?", "?")
        raise ConfigError(f"{path}: parse error at line {line}, column {col}: {exc}") from exc
    preset = doc.get("experiment", {}).get("preset")
    if preset is not None:
        fixed = set(doc.get("society", {})) - {"seed"}
        if fixed or "grid" in doc:
            what = sorted(fixed) + (["grid"] if "grid" in doc else [])
            raise ConfigError(f"preset {preset!r} fixes {', '.join(what)}; only society.seed "
                              "may be set alongside a preset")
        base = preset_dict(preset)
        base["experiment"].update(doc.get("experiment", {}))
        base["society"].update(doc.get("society", {}))
        doc = base
    return config_from_dict(doc)


# -- seeds and snapshots ----------------------------------------------------------


def replicate_seed(seed: int, replicate: int) -> int:
    """Independent seed for one replicate, derived from the experiment seed.

    Seeds depend on the replicate index only, so every grid point sees the same
    set of streams and a single-point sweep reproduces run_experiment exactly.
    """
    return int(np.random.SeedSequence(seed, spawn_key=(replicate,)).generate_state(1, np.uint64)[0])


def config_hash(society: SocietyConfig) -> str:
    blob = json.dumps(society.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def snapshot_dict(state: SocietyState) -> dict:
    return {
        "format": SNAPSHOT_FORMAT,
        "config": state.config.to_dict(),
        "config_hash": config_hash(state.config),
        "clock": state.clock,
        "steps": state.steps,
        "rng_state": state.rng.bit_generator.state,
        "totals": state.totals.tolist(),
        "counts": state.counts.tolist(),
    }


def write_snapshot(state: SocietyState, path) -> None:
    Path(path).write_text(json.dumps(snapshot_dict(state), indent=1))


def read_snapshot(path) -> SocietyState:
    """Restore a society, including its random stream, from a snapshot file."""
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != SNAPSHOT_FORMAT:
        raise ConfigError(f"{path}: not a {SNAPSHOT_FORMAT} file")
    soc = dict(doc["config"])
    if isinstance(soc["network"], list):
        soc["network"] = tuple(tuple(e) for e in soc["network"])
    state = init_society(SocietyConfig(**soc))
    if config_hash(state.config) != doc["config_hash"]:
        raise ConfigError(f"{path}: config hash mismatch")
    state.counts[...] = np.asarray(doc["counts"], dtype=float)
    state.totals[...] = np.asarray(doc["totals"], dtype=float)
    state.rng.bit_generator.state = doc["rng_state"]
    state.steps = int(doc["steps"])
    return state


# -- running -------------------------------------------------------------------------


@dataclass
class ReplicateResult:
    point: int
    replicate: int
    seed: int
    status: str = "ok"
    error: str = ""
    rows: list = field(default_factory=list)
    gain_window: float = math.nan
    variability_window: float = math.nan
    dominant_count: float = math.nan
    final_time: float = math.nan
    snapshot: dict | None = None
    interactions: list | None = None


def _run_replicate(task) -> ReplicateResult:
    point, replicate, society, duration, cadence, samples, want_snapshot, want_log = task
    res = ReplicateResult(point, replicate, society.seed)
    try:
        state = init_society(society)
        log = [] if want_log else None
        series = run(state, duration, cadence, log_records=log, samples=samples)
        last = series[-1]
        res.rows = [r.row() for r in series]
        res.gain_window = last.gain_window
        res.variability_window = window_average(series, attr="variability")
        res.dominant_count = last.dominant_count
        res.final_time = last.time
        res.interactions = log
        if want_snapshot:
            res.snapshot = snapshot_dict(state)
    except Exception as exc:  # a failed replicate is recorded, not fatal
        res.status = "failed"
        res.error = f"{type(exc).__name__}: {exc}"
    return res


def _mean_se(values) -> tuple[float, float]:
    v = np.asarray([x for x in values if not math.isnan(x)], dtype=float)
    if v.size == 0:
        return math.nan, math.nan
    se = float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else math.nan
    return float(v.mean()), se


def theory_row(society: SocietyConfig) -> dict:
    """Threshold, scaled mutation rate and regime for one parameter set."""
    c = society
    la = c.lam * c.alpha
    if c.feedback:
        gamma = threshold_gamma(FEEDBACK, M=c.M)
    else:
        gamma = threshold_gamma(NO_FEEDBACK, M=c.M, C=c.C, A=c.A, lam=c.lam, alpha=c.alpha)
    rep = classify_regime(la, gamma, c.S)
    return {
        "lambda_alpha": la,
        "gamma": gamma,
        "lambda_alpha_over_gamma": la / gamma if gamma > 0 else math.nan,
        "regime": rep.label,
        "predicted_gain": rep.predicted_gain if rep.predicted_gain is not None else math.nan,
    }


def _write_csv(path: Path, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)


def _execute(tasks, jobs: int) -> list[ReplicateResult]:
    if jobs <= 1 or len(tasks) <= 1:
        return [_run_replicate(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_replicate, tasks))


def run_experiment(config: ExperimentConfig, jobs: int = 1, out: str | None = None,
                   aggregate_name: str = "aggregate.csv") -> list[dict]:
    """Run every grid point and replicate; write CSVs and a manifest; return aggregate rows.

    Files written under the output directory:

    - ``point_XXX/replicate_YYY.csv``: metrics time series (METRICS_COLUMNS)
    - ``replicates.csv``: one summary line per replicate
    - ``<aggregate_name>``: mean and standard error per grid point, with theory columns
    - ``dominance.csv``: histogram of final D per point next to the random-assignment law
    - ``manifest.json``: resolved config, seeds and replicate status
    - ``point_XXX/snapshot_YYY.json`` when ``snapshot`` is set
    """
    outdir = Path(out if out is not None else config.output_dir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / ".write-test").write_text("")
        (outdir / ".write-test").unlink()
    except OSError as exc:
        raise ConfigError(f"output directory {outdir} is not writable: {exc}") from exc

    points = config.points()
    tasks = []
    for p, point in enumerate(points):
        base = replace(config.society, **point)
        for r in range(config.replicates):
            soc = replace(base, seed=replicate_seed(config.society.seed, r))
            tasks.append((p, r, soc, config.duration, config.resolved_cadence,
                          config.blind_success_samples, config.snapshot, config.log_interactions))
    results = _execute(tasks, jobs)

    aggregate, replicate_rows, dominance_rows = [], [], []
    manifest_points = []
    for p, point in enumerate(points):
        soc = replace(config.society, **point)
        mine = [res for res in results if res.point == p]
        pdir = outdir / f"point_{p:03d}"
        pdir.mkdir(exist_ok=True)
        for res in mine:
            replicate_rows.append([p, res.replicate, res.seed, res.status, res.gain_window,
                                   res.variability_window, res.dominant_count, res.final_time])
            if res.status != "ok":
                continue
            _write_csv(pdir / f"replicate_{res.replicate:03d}.csv", METRICS_COLUMNS, res.rows)
            if res.snapshot is not None:
                (pdir / f"snapshot_{res.replicate:03d}.json").write_text(
                    json.dumps(res.snapshot, indent=1))
            if res.interactions is not None:
                _write_csv(pdir / f"interactions_{res.replicate:03d}.csv", INTERACTION_COLUMNS,
                           [[*r[:5], int(r[5])] for r in res.interactions])
        ok = [res for res in mine if res.status == "ok"]
        g = _mean_se([res.gain_window for res in ok])
        v = _mean_se([res.variability_window for res in ok])
        d = _mean_se([float(res.dominant_count) for res in ok])
        th = theory_row(soc)
        aggregate.append({
            "point": p, **{k: getattr(soc, k) for k in GRID_KEYS}, "lam": soc.lam,
            "feedback": soc.feedback, "replicates_ok": len(ok),
            "gain_window_mean": g[0], "gain_window_se": g[1],
            "variability_mean": v[0], "variability_se": v[1],
            "dominant_count_mean": d[0], "dominant_count_se": d[1],
            **th, "emerged": bool(g[0] > 0.5),
        })
        pmf = dominant_count_pmf(soc.S, soc.M)
        counts = np.bincount([int(res.dominant_count) for res in ok], minlength=soc.S + 1)
        for D in range(soc.S + 1):
            dominance_rows.append([p, soc.M, soc.S, soc.alpha, D, int(counts[D]),
                                   counts[D] / len(ok) if ok else math.nan, float(pmf[D])])
        manifest_points.append({
            "point": p, "grid": point, "society": soc.to_dict(),
            "replicates": [{"replicate": res.replicate, "seed": res.seed, "status": res.status,
                            "error": res.error} for res in mine],
        })

    _write_csv(outdir / aggregate_name, AGGREGATE_COLUMNS,
               [[row[c] for c in AGGREGATE_COLUMNS] for row in aggregate])
    _write_csv(outdir / "replicates.csv", REPLICATE_COLUMNS, replicate_rows)
    _write_csv(outdir / "dominance.csv", DOMINANCE_COLUMNS, dominance_rows)
    manifest = {
        "package_version": __version__,
        "preset": config.preset,
        "config": config.to_dict(),
        "steps_per_replicate": {p: steps_for(config.duration, replace(config.society, **pt).N)
                                for p, pt in enumerate(points)},
        "points": manifest_points,
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True))
    return aggregate


def sweep(config: ExperimentConfig, grid: dict | None = None, jobs: int = 1,
          out: str | None = None) -> list[dict]:
    """Run a grid of parameter points and write ``sweep.csv`` (AGGREGATE_COLUMNS).

    Refuses to start when grid size x replicates x steps exceeds ``budget_steps``.
    """
    if grid is not None:
        config = replace(config, grid=grid)
    if not config.grid:
        raise ConfigError("sweep needs a nonempty grid")
    need = config.required_steps()
    if need > config.budget_steps:
        raise ConfigError(f"sweep needs about {need:.3g} interaction steps, over the budget of "
                          f"{config.budget_steps:.3g}; raise budget_steps or shrink the grid")
    return run_experiment(config, jobs=jobs, out=out, aggregate_name="sweep.csv")
