"""Communicative performance and population statistics of a society snapshot."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UndefinedStatisticError

WINDOW_FRACTION = 0.2


@dataclass
class MetricsRecord:
    time: float
    p_s: float
    gain: float
    gain_window: float
    variability: float
    dominant_count: int
    dominant: tuple = field(default=(), repr=False)

    def row(self) -> list:
        return [self.time, self.p_s, self.gain, self.gain_window, self.variability,
                self.dominant_count]


METRICS_COLUMNS = ["time", "p_s", "gain", "gain_window", "variability", "dominant_count"]


def _phi(state_or_phi) -> np.ndarray:
    if isinstance(state_or_phi, np.ndarray):
        return state_or_phi
    return state_or_phi.phi()


def blind_success(state) -> float:
    """Probability that a random ordered pair communicates a uniformly random meaning.

    Accepts a society state or a raw (N, M, S) production array. The sum over
    ordered pairs i != j is done as (all pairs) - (diagonal), O(N M S).
    """
    phi = _phi(state)
    N, M, _ = phi.shape
    if N < 2:
        raise ValueError("blind success needs at least two agents")
    z = phi.sum(axis=1, keepdims=True)  # (N, 1, S) receiver column sums
    scaled = phi / z
    all_pairs = np.sum(phi.sum(axis=0) * scaled.sum(axis=0))
    diagonal = np.sum(phi * scaled)
    return float((all_pairs - diagonal) / (N * (N - 1) * M))


def sampled_blind_success(state, K: int, rng: np.random.Generator) -> tuple[float, float]:
    """Monte Carlo estimate over ``K`` random ordered pairs; returns (estimate, stderr)."""
    phi = _phi(state)
    N, M, _ = phi.shape
    i = rng.integers(0, N, K)
    j = rng.integers(0, N - 1, K)
    j = j + (j >= i)
    z = phi.sum(axis=1)  # (N, S)
    vals = np.einsum("kms,kms->k", phi[i], phi[j] / z[j][:, None, :]) / M
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(K)) if K > 1 else math.nan


def communicative_gain(p_s: float, M: int, S: int) -> float:
    return (M * p_s - 1.0) / (S - 1.0)


def dominance_profile(state) -> tuple[list[int | None], int]:
    """Per-meaning dominant signal (society mean above 1/2, strictly) and the count D."""
    mean = _phi(state).mean(axis=0)
    best = mean.argmax(axis=1)
    dominant = [int(s) if mean[m, s] > 0.5 else None for m, s in enumerate(best)]
    D = len({s for s in dominant if s is not None})
    return dominant, D


def signal_variability(state) -> float:
    """Across-agent variability of signal use, averaged over meanings.

    Variances use the population (1/N) convention. Meanings where the society
    is unanimously one-hot have a vanishing denominator and are skipped.
    """
    phi = _phi(state)
    if phi.shape[0] < 2:
        raise ValueError("variability needs at least two agents")
    mean = phi.mean(axis=0)
    num = phi.var(axis=0).sum(axis=1)
    den = 1.0 - np.sum(mean**2, axis=1)
    ok = den >= 1e-12
    if not ok.any():
        raise UndefinedStatisticError("variability undefined: society unanimously one-hot")
    return float(np.mean(num[ok] / den[ok]))


def measure(state, history: list | None = None, t0: float = 0.0, samples: int = 0,
            rng: np.random.Generator | None = None) -> MetricsRecord:
    """Snapshot metrics; ``gain_window`` averages gain over the trailing 20% of [t0, now].

    With ``samples > 0`` the blind success is estimated from that many random
    pairs drawn with ``rng`` instead of being summed exactly.
    """
    c = state.config
    phi = state.phi()
    if samples > 0:
        p_s = sampled_blind_success(phi, samples, rng)[0]
    else:
        p_s = blind_success(phi)
    gain = communicative_gain(p_s, c.M, c.S)
    try:
        v = signal_variability(phi)
    except UndefinedStatisticError:
        v = math.nan
    dominant, D = dominance_profile(phi)
    t = state.clock
    cut = t - WINDOW_FRACTION * (t - t0)
    window = [r.gain for r in (history or []) if r.time >= cut - 1e-12] + [gain]
    return MetricsRecord(t, p_s, gain, float(np.mean(window)), v, D, tuple(dominant))


def window_average(series, fraction: float = WINDOW_FRACTION, attr: str = "gain") -> float:
    """Mean of ``attr`` over records in the final ``fraction`` of the run."""
    if not series:
        return math.nan
    t_end = series[-1].time
    t_start = series[0].time - (series[1].time - series[0].time if len(series) > 1 else 0)
    cut = t_end - fraction * (t_end - t_start)
    vals = [getattr(r, attr) for r in series if r.time >= cut - 1e-12]
    return float(np.nanmean(vals))
