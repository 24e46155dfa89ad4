"""Decaying-count association memory.

Each agent keeps an M x S table of exponentially decayed counts ``n(s|m)``.
The prior mass ``alpha / S`` per cell is added at read time and never stored,
so forgetting always pulls the production distribution back to uniform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numba
import numpy as np

COUNT_FLOOR = 1e-300


@dataclass
class AssociationMemory:
    M: int
    S: int
    alpha: float
    lam: float
    counts: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"lambda must lie in (0,1), got {self.lam}")
        if self.counts is None:
            self.counts = np.zeros((self.M, self.S))
        elif self.counts.shape != (self.M, self.S):
            raise ValueError(f"counts must have shape {(self.M, self.S)}")

    def phi(self) -> np.ndarray:
        """Full M x S production table."""
        return (self.counts + self.alpha / self.S) / (
            self.counts.sum(axis=1, keepdims=True) + self.alpha
        )


class InteractionHistoryEntry(NamedTuple):
    meaning: int
    signal: int
    stored: bool


def production_distribution(mem: AssociationMemory, m: int) -> np.ndarray:
    row = mem.counts[m]
    return (row + mem.alpha / mem.S) / (row.sum() + mem.alpha)


def interpretation_distribution(
    mem: AssociationMemory, receiver_weights: np.ndarray, s: int
) -> np.ndarray:
    """Posterior over meanings given signal ``s`` and the receiver's attention prior."""
    likelihood = (mem.counts[:, s] + mem.alpha / mem.S) / (
        mem.counts.sum(axis=1) + mem.alpha
    )
    w = likelihood * np.asarray(receiver_weights, dtype=float)
    total = w.sum()
    assert total > 0.0
    return w / total


@numba.njit(cache=True)
def decay_and_store(row, s, store, lam):
    """Scale ``row`` by (1 - lam), then add one count at ``s`` if ``store``.

    Returns the new row total.
    """
    keep = 1.0 - lam
    total = 0.0
    for k in range(row.shape[0]):
        v = row[k] * keep
        if v < COUNT_FLOOR:
            v = 0.0
        row[k] = v
    if store:
        row[s] += 1.0
    for k in range(row.shape[0]):
        total += row[k]
    return total


def record_interaction(mem: AssociationMemory, m: int, s: int, store: bool) -> None:
    if not (0 <= m < mem.M and 0 <= s < mem.S):
        raise IndexError(f"meaning {m} / signal {s} out of range")
    decay_and_store(mem.counts[m], s, bool(store), mem.lam)


def batch_posterior_predictive(
    history: Sequence[InteractionHistoryEntry], alpha: float, lam: float, S: int, M: int
) -> np.ndarray:
    """Evaluate the closed-form posterior predictive table from a full history.

    Each meaning keeps its own clock: the weight of entry t among the T_m
    entries interpreted as meaning m is ``(1 - lam)**(T_m - t)``.
    """
    table = np.empty((M, S))
    for m in range(M):
        entries = [e for e in history if e.meaning == m]
        T = len(entries)
        num = np.zeros(S)
        den = 0.0
        for t, e in enumerate(entries, start=1):
            if not e.stored:
                continue
            w = (1.0 - lam) ** (T - t)
            num[e.signal] += w
            den += w
        table[m] = (num + alpha / S) / (den + alpha)
    return table
