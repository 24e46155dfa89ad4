"""Interaction engine: pair selection, topic, signal, interpretation and memory update."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numba
import numpy as np

from .attention import FIXED, ONE_HOT, AttentionParams, draw_pair_into
from ._random import categorical, dirichlet_into, log_gamma_variate
from .errors import ConfigError
from .memory import AssociationMemory, decay_and_store


@dataclass(frozen=True)
class SocietyConfig:
    N: int = 20
    M: int = 24
    S: int = 12
    alpha: float = 0.1
    lam: float = 0.01
    C: float = 0.0
    A: float = 1.0
    feedback: bool = False
    # "complete" or an explicit list of directed (signaller, receiver) pairs
    network: str | tuple[tuple[int, int], ...] = "complete"
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.network, str):
            object.__setattr__(
                self, "network", tuple((int(a), int(b)) for a, b in self.network)
            )
        problems = self.problems()
        if problems:
            raise ConfigError("invalid society config: " + "; ".join(problems))

    def problems(self) -> list[str]:
        out = []
        for name in ("N", "M", "S"):
            if getattr(self, name) < 2:
                out.append(f"{name} must be at least 2")
        if not self.alpha > 0:
            out.append("alpha must be positive")
        if not 0 < self.lam < 1:
            out.append("lam must lie in (0,1)")
        if not 0 <= self.C <= 1:
            out.append("C must lie in [0,1]")
        if not 0 <= self.A <= 1:
            out.append("A must lie in [0,1]")
        if isinstance(self.network, str):
            if self.network != "complete":
                out.append(f"network must be 'complete' or an edge list, got {self.network!r}")
        else:
            if not self.network:
                out.append("network needs at least one ordered pair")
            for a, b in self.network:
                if a == b or not (0 <= a < self.N and 0 <= b < self.N):
                    out.append(f"network edge ({a}, {b}) is not a pair of distinct agents")
                    break
        return out

    @property
    def attention(self) -> AttentionParams:
        return AttentionParams(M=self.M, C=self.C, A=self.A)

    def edges(self) -> np.ndarray:
        """Explicit edge array; empty for the complete graph (sampled without a table)."""
        if isinstance(self.network, str):
            return np.zeros((0, 2), dtype=np.int64)
        return np.asarray(self.network, dtype=np.int64).reshape(-1, 2)

    def to_dict(self) -> dict:
        d = asdict(self)
        if not isinstance(self.network, str):
            d["network"] = [list(e) for e in self.network]
        return d


class InteractionRecord(NamedTuple):
    signaller: int
    receiver: int
    topic: int
    signal: int
    interpretation: int
    stored: bool


@dataclass
class SocietyState:
    config: SocietyConfig
    counts: np.ndarray  # (N, M, S) decayed counts
    totals: np.ndarray  # (N, M) row sums of counts
    rng: np.random.Generator = field(repr=False)
    steps: int = 0

    @property
    def clock(self) -> float:
        return self.steps / self.config.N

    def memory(self, agent: int) -> AssociationMemory:
        """View of one agent's memory; writes go through to the society state."""
        c = self.config
        return AssociationMemory(c.M, c.S, c.alpha, c.lam, counts=self.counts[agent])

    def phi(self) -> np.ndarray:
        """Production tables of all agents, shape (N, M, S)."""
        a = self.config.alpha
        return (self.counts + a / self.config.S) / (self.totals[..., None] + a)


def init_society(config: SocietyConfig) -> SocietyState:
    c = config
    return SocietyState(
        config=c,
        counts=np.zeros((c.N, c.M, c.S)),
        totals=np.zeros((c.N, c.M)),
        rng=np.random.default_rng(np.random.SeedSequence(c.seed)),
    )


EXPLICIT, URN = 0, 1
N_BLOCKS = 4
BLOCK_RATIO = 4.0  # envelope shrinks by this factor per block
BLOCK_URN_CAPACITY = 32


@numba.njit(cache=True)
def _base_draw(rng, mean_w, uniform):
    if uniform:
        return rng.integers(0, mean_w.shape[0])
    return categorical(rng, mean_w, 1.0)


@numba.njit(cache=True)
def _interpret_collapsed(rng, counts, inv, j, signal, prior, topic, shared, conc, uniform,
                         ws, blk, members, start, urn, nurn, lg, rec):
    """Sample the receiver's interpretation with its Dirichlet attention integrated out.

    The target is m ~ w_m rho_j(m), w_m = phi_j(signal|m), rho_j ~ Dir(conc)
    (plus one observation of ``topic`` when attention is shared). Meanings are
    grouped into geometric blocks of w / w_max; block masses are drawn explicitly
    (Dirichlet aggregation), while draws inside a block come from a Polya urn
    for that block's conditional weights. Proposals ~ W_b rho(m) with block
    envelope W_b are accepted with probability w_m / W_b (at least
    1 / BLOCK_RATIO outside the last, catch-all block). A block urn that fills up triggers an explicit
    draw of every within-block weight from its posterior.
    """
    M = counts.shape[1]
    K = start.shape[0] - 1
    w_max = 0.0
    for m in range(M):
        ws[m] = (counts[j, m, signal] + prior) * inv[j, m]
        if ws[m] > w_max:
            w_max = ws[m]
    for b in range(K + 1):
        start[b] = 0
    for m in range(M):
        b = 0
        cut = w_max / BLOCK_RATIO
        while b < K - 1 and ws[m] < cut:
            b += 1
            cut /= BLOCK_RATIO
        blk[m] = b
        start[b + 1] += 1
    for b in range(K):
        start[b + 1] += start[b]
    for b in range(K):
        nurn[b] = start[b]  # reuse as fill cursor
    for m in range(M):
        b = blk[m]
        members[nurn[b]] = m
        nurn[b] += 1

    top = -np.inf
    for b in range(K):
        nurn[b] = 0
        if start[b + 1] == start[b]:
            lg[b] = -np.inf
            continue
        beta = 0.0
        for k in range(start[b], start[b + 1]):
            beta += conc[members[k]]
        if shared and blk[topic] == b:
            beta += 1.0
        lg[b] = log_gamma_variate(rng, beta) - b * math.log(BLOCK_RATIO)
        if lg[b] > top:
            top = lg[b]
    z = 0.0
    for b in range(K):
        lg[b] = math.exp(lg[b] - top)
        z += lg[b]
    if shared:
        b = blk[topic]
        urn[b, 0] = topic
        nurn[b] = 1

    while True:
        b = categorical(rng, lg, z)
        lo, hi = start[b], start[b + 1]
        n = nurn[b]
        if n == BLOCK_URN_CAPACITY:
            break
        beta0 = 0.0
        if not uniform:
            for k in range(lo, hi):
                beta0 += conc[members[k]]
        else:
            beta0 = conc[0] * (hi - lo)
        if n == 0 or rng.random() * (beta0 + n) < beta0:
            if uniform:
                m = members[lo + rng.integers(0, hi - lo)]
            else:
                u = rng.random() * beta0
                k = lo
                acc = conc[members[k]]
                while acc <= u and k < hi - 1:
                    k += 1
                    acc += conc[members[k]]
                m = members[k]
        else:
            m = urn[b, rng.integers(0, n)]
        urn[b, n] = m
        nurn[b] = n + 1
        if rng.random() * w_max < ws[m] * BLOCK_RATIO**b:
            return m

    # explicit posterior: block masses are known, within-block weights are drawn
    for b in range(K):
        lo, hi = start[b], start[b + 1]
        if hi == lo:
            continue
        # rec holds posterior concentrations of the block members, then weights
        for k in range(lo, hi):
            rec[members[k]] = conc[members[k]]
        for k in range(nurn[b]):
            rec[urn[b, k]] += 1.0
        tot = 0.0
        for k in range(lo, hi):
            m = members[k]
            rec[m] = math.exp(log_gamma_variate(rng, rec[m]))
            tot += rec[m]
        # undo the envelope factor so that the block mass is the raw gamma mass
        scale = lg[b] * BLOCK_RATIO**b / tot if tot > 0 else 0.0
        for k in range(lo, hi):
            rec[members[k]] *= scale
    z = 0.0
    for m in range(M):
        rec[m] *= ws[m]
        z += rec[m]
    return categorical(rng, rec, z)


@numba.njit(cache=True)
def _simulate(counts, totals, n_steps, rng, edges, alpha, lam, mode, conc, mean_w, A,
              feedback, log, method):
    N, M, S = counts.shape
    sig = np.empty(M)
    rec = np.empty(M)
    w = np.empty(M)
    prod = np.empty(S)
    ws = np.empty(M)
    blk = np.empty(M, dtype=np.int64)
    members = np.empty(M, dtype=np.int64)
    start = np.empty(N_BLOCKS + 1, dtype=np.int64)
    urn = np.empty((N_BLOCKS, BLOCK_URN_CAPACITY), dtype=np.int64)
    nurn = np.empty(N_BLOCKS, dtype=np.int64)
    lg = np.empty(N_BLOCKS)
    uniform = np.all(mean_w == mean_w[0])
    prior = alpha / S
    inv = 1.0 / (totals + alpha)
    n_edges = edges.shape[0]
    for t in range(n_steps):
        shared = False
        if n_edges == 0:
            i = rng.integers(0, N)
            j = rng.integers(0, N - 1)
            if j >= i:
                j += 1
        else:
            e = rng.integers(0, n_edges)
            i = edges[e, 0]
            j = edges[e, 1]

        if method == EXPLICIT or mode == FIXED:
            draw_pair_into(rng, mode, conc, mean_w, A, sig, rec)
            topic = categorical(rng, sig, 1.0)
        else:
            shared = rng.random() < A
            topic = _base_draw(rng, mean_w, uniform)

        row = counts[i, topic]
        z = 0.0
        for s in range(S):
            prod[s] = row[s] + prior
            z += prod[s]
        signal = categorical(rng, prod, z)

        if method == EXPLICIT or mode == FIXED:
            z = 0.0
            for m in range(M):
                w[m] = (counts[j, m, signal] + prior) * inv[j, m] * rec[m]
                z += w[m]
            interp = categorical(rng, w, z)
        elif mode == ONE_HOT:
            interp = topic if shared else _base_draw(rng, mean_w, uniform)
        else:
            interp = _interpret_collapsed(rng, counts, inv, j, signal, prior, topic, shared,
                                          conc, uniform, ws, blk, members, start, urn,
                                          nurn, lg, rec)

        store = (not feedback) or interp == topic
        totals[j, interp] = decay_and_store(counts[j, interp], signal, store, lam)
        inv[j, interp] = 1.0 / (totals[j, interp] + alpha)
        if t < log.shape[0]:
            log[t, 0] = i
            log[t, 1] = j
            log[t, 2] = topic
            log[t, 3] = signal
            log[t, 4] = interp
            log[t, 5] = store


def advance(state: SocietyState, n_steps: int, log: np.ndarray | None = None,
            method: int = URN) -> None:
    """Run ``n_steps`` interactions in place; optionally log them into an (n, 6) int array.

    ``method`` selects how attention enters: ``URN`` (default) integrates the
    Dirichlet weights out, ``EXPLICIT`` draws both weight vectors every step.
    The two are equal in distribution but consume the random stream differently.
    """
    c = state.config
    att = c.attention
    if log is None:
        log = np.zeros((0, 6), dtype=np.int64)
    _simulate(
        state.counts, state.totals, int(n_steps), state.rng, c.edges(), c.alpha, c.lam,
        att.mode, att.concentration, att.mean_weights, c.A, c.feedback, log, method,
    )
    state.steps += int(n_steps)


def step(state: SocietyState) -> InteractionRecord:
    log = np.zeros((1, 6), dtype=np.int64)
    advance(state, 1, log)
    i, j, mu, s, m, stored = (int(v) for v in log[0])
    return InteractionRecord(i, j, mu, s, m, bool(stored))


def steps_for(duration: float, N: int) -> int:
    return math.ceil(duration * N - 1e-9)


def run(state: SocietyState, duration: float, cadence: float | None = None,
        log_records: list | None = None, samples: int = 0):
    """Advance the society by ``duration`` time units, measuring every ``cadence``.

    Returns the list of ``MetricsRecord`` taken at the end of each cadence
    interval (the last one possibly shorter). ``log_records`` collects every
    ``InteractionRecord`` when given. ``samples > 0`` switches blind success
    to the pair-sampled estimator, fed by its own stream so the trajectory is
    unchanged.
    """
    from .metrics import measure

    N = state.config.N
    total = steps_for(duration, N)
    if total <= 0:
        return []
    if cadence is None or cadence <= 0:
        cadence = duration / 100
    start = state.steps
    series = []
    sampler = np.random.default_rng([state.config.seed, 1]) if samples > 0 else None
    k = 1
    done = 0
    while done < total:
        target = min(total, steps_for(k * cadence, N))
        n = target - done
        if n > 0:
            log = np.zeros((n, 6), dtype=np.int64) if log_records is not None else None
            advance(state, n, log)
            if log is not None:
                log_records.extend(
                    InteractionRecord(int(a), int(b), int(c), int(d), int(e), bool(f))
                    for a, b, c, d, e, f in log
                )
            done = target
            series.append(measure(state, series, t0=start / N, samples=samples, rng=sampler))
        k += 1
    return series


def pair_frequencies(config: SocietyConfig, n_steps: int) -> np.ndarray:
    """Empirical (signaller, receiver) frequency matrix over ``n_steps`` fresh steps."""
    state = init_society(config)
    log = np.zeros((n_steps, 6), dtype=np.int64)
    advance(state, n_steps, log)
    freq = np.zeros((config.N, config.N))
    np.add.at(freq, (log[:, 0], log[:, 1]), 1)
    return freq / n_steps


@numba.njit(cache=True)
def _interpretation_draws(rng, counts, totals, alpha, j, signal, topic, shared, mode,
                          conc, mean_w, method, n):
    N, M, S = counts.shape
    prior = alpha / S
    inv = 1.0 / (totals + alpha)
    uniform = np.all(mean_w == mean_w[0])
    rec = np.empty(M)
    ws = np.empty(M)
    blk = np.empty(M, dtype=np.int64)
    members = np.empty(M, dtype=np.int64)
    start = np.empty(N_BLOCKS + 1, dtype=np.int64)
    urn = np.empty((N_BLOCKS, BLOCK_URN_CAPACITY), dtype=np.int64)
    nurn = np.empty(N_BLOCKS, dtype=np.int64)
    lg = np.empty(N_BLOCKS)
    post = conc.copy()
    if shared:
        post[topic] += 1.0
    out = np.empty(n, dtype=np.int64)
    for t in range(n):
        if method == EXPLICIT:
            dirichlet_into(rng, post, rec)
            z = 0.0
            for m in range(M):
                rec[m] *= (counts[j, m, signal] + prior) * inv[j, m]
                z += rec[m]
            out[t] = categorical(rng, rec, z)
        else:
            out[t] = _interpret_collapsed(rng, counts, inv, j, signal, prior, topic, shared,
                                          conc, uniform, ws, blk, members, start, urn,
                                          nurn, lg, rec)
    return out


def interpretation_draws(state: SocietyState, receiver: int, signal: int, topic: int,
                         shared: bool, n: int, method: int = URN) -> np.ndarray:
    """``n`` independent interpretations of ``signal`` by ``receiver`` for a fixed memory.

    Dirichlet attention only; the posterior given a shared ``topic`` is used
    when ``shared``. Exposed so the collapsed and explicit samplers can be
    compared against each other and against an outside oracle.
    """
    att = state.config.attention
    if att.mode == FIXED or att.mode == ONE_HOT:
        raise ValueError("interpretation_draws needs 0 < C < 1")
    return _interpretation_draws(
        state.rng, state.counts, state.totals, state.config.alpha, receiver, signal, topic,
        shared, att.mode, att.concentration, att.mean_weights, method, n,
    )
