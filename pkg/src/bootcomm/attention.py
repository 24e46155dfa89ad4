"""Per-interaction attention weights with controlled certainty and alignment."""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from ._random import categorical, dirichlet_into
from .errors import UndefinedStatisticError

# attention sampling modes understood by the jitted samplers
FIXED, DIRICHLET, ONE_HOT = 0, 1, 2


def concentration_from_certainty(C: float, M: int) -> float:
    """Per-component symmetric Dirichlet concentration giving certainty ``C``.

    A symmetric Dirichlet with total concentration a0 has
    ``sum Var = (1 - 1/M) / (a0 + 1)``, so the certainty is ``1 / (a0 + 1)``
    and ``a0 = (1 - C) / C``.
    """
    if not 0.0 < C < 1.0:
        raise ValueError(f"C must lie strictly inside (0, 1) for a Dirichlet, got {C}")
    if M < 2:
        raise ValueError(f"M must be at least 2, got {M}")
    return (1.0 - C) / (C * M)


@dataclass(frozen=True)
class AttentionParams:
    M: int
    C: float
    A: float
    mean_weights: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.M < 2:
            raise ValueError(f"M must be at least 2, got {self.M}")
        if not 0.0 <= self.C <= 1.0:
            raise ValueError(f"C must lie in [0,1], got {self.C}")
        if not 0.0 <= self.A <= 1.0:
            raise ValueError(f"A must lie in [0,1], got {self.A}")
        if self.mean_weights is None:
            w = np.full(self.M, 1.0 / self.M)
        else:
            w = np.asarray(self.mean_weights, dtype=float)
            if w.shape != (self.M,) or np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-12:
                raise ValueError("mean_weights must be M positive entries summing to 1")
        object.__setattr__(self, "mean_weights", w)

    @property
    def mode(self) -> int:
        if self.C == 0.0 or not np.isfinite((1.0 - self.C) / self.C):
            # infinite concentration is a point mass at the mean weights
            return FIXED
        if self.C == 1.0:
            return ONE_HOT
        return DIRICHLET

    @property
    def concentration(self) -> np.ndarray:
        """Dirichlet concentration vector; zeros outside the Dirichlet mode."""
        if self.mode != DIRICHLET:
            return np.zeros(self.M)
        return (1.0 - self.C) / self.C * self.mean_weights


@dataclass
class AttentionDraw:
    signaller_weights: np.ndarray
    receiver_weights: np.ndarray
    shared: bool


@numba.njit(cache=True)
def draw_weights_into(rng, mode, concentration, mean_weights, out):
    if mode == DIRICHLET:
        dirichlet_into(rng, concentration, out)
    elif mode == ONE_HOT:
        k = categorical(rng, mean_weights, 1.0)
        out[:] = 0.0
        out[k] = 1.0
    else:
        out[:] = mean_weights


@numba.njit(cache=True)
def draw_pair_into(rng, mode, concentration, mean_weights, A, sig, rec):
    """Signaller weights into ``sig``, receiver weights into ``rec``; returns the copy flag."""
    draw_weights_into(rng, mode, concentration, mean_weights, sig)
    if mode == FIXED:
        rec[:] = sig
        return False
    shared = rng.random() < A
    if shared:
        rec[:] = sig
    else:
        draw_weights_into(rng, mode, concentration, mean_weights, rec)
    return shared


def sample_attention_pair(params: AttentionParams, rng: np.random.Generator) -> AttentionDraw:
    sig = np.empty(params.M)
    rec = np.empty(params.M)
    shared = draw_pair_into(
        rng, params.mode, params.concentration, params.mean_weights, params.A, sig, rec
    )
    return AttentionDraw(sig, rec, bool(shared))


def sample_attention_pairs(
    params: AttentionParams, rng: np.random.Generator, n: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``n`` draws stacked as (signaller (n, M), receiver (n, M), shared (n,))."""
    return _draw_many(rng, params.mode, params.concentration, params.mean_weights, params.A, n)


@numba.njit(cache=True)
def _draw_many(rng, mode, concentration, mean_weights, A, n):
    M = mean_weights.shape[0]
    sig = np.empty((n, M))
    rec = np.empty((n, M))
    shared = np.zeros(n, dtype=np.bool_)
    for t in range(n):
        shared[t] = draw_pair_into(rng, mode, concentration, mean_weights, A, sig[t], rec[t])
    return sig, rec, shared


def estimate_certainty(draws) -> float:
    """Sum of per-meaning variances over its maximum ``1 - sum mean**2``.

    Moments are population moments over the draws (rows).
    """
    x = np.asarray(draws, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need at least two weight vectors stacked as rows")
    mean = x.mean(axis=0)
    denom = 1.0 - np.sum(mean**2)
    if denom < 1e-12:
        raise UndefinedStatisticError("certainty undefined: all mass on one fixed meaning")
    return float(x.var(axis=0).sum() / denom)


def estimate_alignment(signaller, receiver) -> float:
    x = np.asarray(signaller, dtype=float)
    y = np.asarray(receiver, dtype=float)
    if x.shape != y.shape or x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need at least two (signaller, receiver) pairs of equal shape")
    vx = x.var(axis=0)
    vy = y.var(axis=0)
    if vx.sum() < 1e-12 or vy.sum() < 1e-12:
        raise UndefinedStatisticError("alignment undefined: zero attention variance")
    cov = ((x - x.mean(axis=0)) * (y - y.mean(axis=0))).mean(axis=0)
    return float(cov.sum() / np.sqrt(vx * vy).sum())
