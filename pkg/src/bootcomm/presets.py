"""Parameter sets behind each reproduced figure.

Society values are the published ones for each figure. Run lengths are set by the
slowest process in each regime rather than by the relaxation time ``M / lam``:

- tight constraints: neutral fixation of each meaning's signal across the
  society, of order ``M * N / lam**2`` time units;
- feedback with a weak prior: coarsening of competing local conventions;
- no feedback: growth at a rate of order ``(lam / M) * (Gamma - lam * alpha)``,
  millions of time units at ``M = 55``.
"""

from __future__ import annotations

import copy

from .errors import ConfigError

PRESETS: dict[str, dict] = {
    # tight constraints, dominance patterns for two prior strengths
    "fig5": {
        "experiment": {"duration": 3e6, "replicates": 10},
        "society": {"N": 5, "lam": 0.01, "C": 1.0, "A": 1.0, "S": 12, "M": 14, "alpha": 0.05},
        "grid": {"M": [14, 17, 36], "alpha": [0.05, 0.01]},
    },
    # tight constraints, distribution of the number of dominant signals
    "fig6": {
        "experiment": {"duration": 3e6, "replicates": 10},
        "society": {"N": 5, "lam": 0.01, "C": 1.0, "A": 1.0, "S": 12, "M": 14, "alpha": 0.01},
        "grid": {"M": [14, 17, 36]},
    },
    # uninformative attention with feedback, gain against prior strength
    "fig8": {
        "experiment": {"duration": 4e5, "replicates": 10},
        "society": {"N": 20, "lam": 0.01, "C": 0.0, "A": 1.0, "S": 12, "M": 24,
                    "feedback": True},
        "grid": {"M": [24, 36, 48], "N": [20, 40],
                 "alpha": [0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0]},
    },
    # no feedback, gain against the scaled mutation rate; N is not given, 20 is used
    "fig9": {
        "experiment": {"duration": 3e6, "replicates": 10},
        "society": {"N": 20, "lam": 0.01, "M": 55, "S": 11, "C": 0.1, "A": 1.0},
        "grid": {"S": [5, 11], "C": [0.05, 0.1, 0.3], "A": [0.95, 1.0],
                 "alpha": [0.02, 0.05, 0.1, 0.2, 0.4]},
    },
    # no feedback, emergence over the certainty x alignment plane
    "fig10": {
        "experiment": {"duration": 3e6, "replicates": 10},
        "society": {"N": 20, "lam": 0.01, "S": 11, "M": 55, "C": 0.1, "A": 1.0, "alpha": 0.1},
        "grid": {"C": [0.05, 0.1, 0.2, 0.3, 0.5, 0.8],
                 "A": [0.75, 0.8, 0.85, 0.9, 0.95, 1.0],
                 "alpha": [0.05, 0.1, 0.2]},
    },
}


def preset_dict(name: str) -> dict:
    """Deep copy of a preset in the nested config-file layout, labelled with its name."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    doc = copy.deepcopy(PRESETS[name])
    doc["experiment"]["preset"] = name
    doc["experiment"].setdefault("output_dir", f"results/{name}")
    return doc


def preset_config(name: str, **overrides):
    """ExperimentConfig for a preset, with experiment-level fields overridden."""
    from .experiment import config_from_dict

    doc = preset_dict(name)
    seed = overrides.pop("seed", None)
    if seed is not None:
        doc["society"]["seed"] = seed
    doc["experiment"].update({k: v for k, v in overrides.items() if v is not None})
    return config_from_dict(doc)
