import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bootcomm.errors import ConfigError
from bootcomm.memory import batch_posterior_predictive, InteractionHistoryEntry
from bootcomm.society import (
    EXPLICIT,
    URN,
    SocietyConfig,
    advance,
    init_society,
    interpretation_draws,
    pair_frequencies,
    run,
    step,
    steps_for,
)


def test_config_validation():
    SocietyConfig()
    for bad in [dict(C=1.5), dict(A=-0.1), dict(alpha=0), dict(lam=1.0), dict(N=1),
                dict(network="ring"), dict(network=((0, 0),)), dict(N=3, network=((0, 5),))]:
        with pytest.raises(ConfigError):
            SocietyConfig(**bad)
    assert "C must lie in [0,1]" in str(pytest.raises(ConfigError, SocietyConfig, C=2).value)


def test_same_seed_same_trajectory():
    cfg = SocietyConfig(N=6, M=8, S=4, C=0.4, A=0.7, seed=11)
    a, b = init_society(cfg), init_society(cfg)
    advance(a, 5000)
    advance(b, 5000)
    np.testing.assert_array_equal(a.counts, b.counts)
    c = init_society(SocietyConfig(N=6, M=8, S=4, C=0.4, A=0.7, seed=12))
    advance(c, 5000)
    assert not np.array_equal(a.counts, c.counts)


@pytest.mark.parametrize("C", [0.0, 0.3, 1.0])
def test_step_touches_one_row(C):
    state = init_society(SocietyConfig(N=5, M=6, S=3, C=C, seed=2))
    advance(state, 200)
    for _ in range(50):
        before = state.counts.copy()
        rec = step(state)
        changed = np.argwhere(np.any(state.counts != before, axis=2))
        assert all((a, m) == (rec.receiver, rec.interpretation) for a, m in changed)
        np.testing.assert_allclose(state.totals, state.counts.sum(axis=2), rtol=1e-12)
    assert state.steps == 250
    assert state.clock == pytest.approx(50.0)


def test_receiver_memory_matches_batch_oracle():
    cfg = SocietyConfig(N=3, M=4, S=3, C=0.5, A=0.5, alpha=0.3, lam=0.05, feedback=True, seed=4)
    state = init_society(cfg)
    records = []
    run(state, 300.0, cadence=100.0, log_records=records)
    for agent in range(cfg.N):
        hist = [InteractionHistoryEntry(r.interpretation, r.signal, r.stored)
                for r in records if r.receiver == agent]
        oracle = batch_posterior_predictive(hist, cfg.alpha, cfg.lam, cfg.S, cfg.M)
        np.testing.assert_allclose(state.memory(agent).phi(), oracle, atol=1e-10)


def test_feedback_stores_only_matches():
    state = init_society(SocietyConfig(N=4, M=6, S=3, feedback=True, seed=5))
    records = []
    run(state, 500.0, log_records=records)
    assert all(r.stored == (r.interpretation == r.topic) for r in records)


def test_perfect_attention_always_succeeds():
    state = init_society(SocietyConfig(N=5, M=14, S=12, C=1.0, A=1.0, feedback=True, seed=6))
    records = []
    run(state, 200.0, log_records=records)
    assert all(r.interpretation == r.topic and r.stored for r in records)


def test_uninformative_attention_with_flat_memory_stores_one_in_m():
    cfg = SocietyConfig(N=20, M=24, S=12, C=0.0, alpha=1e9, feedback=True, seed=7)
    state = init_society(cfg)
    n = 400_000
    log = np.zeros((n, 6), dtype=np.int64)
    advance(state, n, log)
    p = 1 / 24
    assert abs(log[:, 5].mean() - p) < 5 * np.sqrt(p * (1 - p) / n)


@pytest.mark.parametrize("C, A", [(0.2, 1.0), (0.6, 0.5), (1.0, 0.3), (0.5, 0.0)])
@pytest.mark.parametrize("method", [URN, EXPLICIT])
def test_match_rate_with_flat_memory(C, A, method):
    M = 10
    state = init_society(SocietyConfig(N=4, M=M, S=5, C=C, A=A, alpha=1e9, seed=8))
    n = 300_000
    log = np.zeros((n, 6), dtype=np.int64)
    advance(state, n, log, method=method)
    p = A * C + (1 - A * C) / M
    assert abs(np.mean(log[:, 2] == log[:, 4]) - p) < 5 * np.sqrt(p * (1 - p) / n)


def test_pair_frequencies_uniform_off_diagonal():
    N, n = 8, 1_000_000
    freq = pair_frequencies(SocietyConfig(N=N, seed=9), n)
    assert np.all(np.diag(freq) == 0)
    p = 1 / (N * (N - 1))
    off = freq[~np.eye(N, dtype=bool)]
    assert np.max(np.abs(off - p)) < 5 * np.sqrt(p * (1 - p) / n)


def test_explicit_network_only_uses_listed_pairs():
    edges = ((0, 1), (1, 2), (2, 0))
    freq = pair_frequencies(SocietyConfig(N=3, network=edges, seed=10), 30_000)
    allowed = np.zeros((3, 3), dtype=bool)
    for a, b in edges:
        allowed[a, b] = True
    assert np.all(freq[~allowed] == 0)
    assert np.all(np.abs(freq[allowed] - 1 / 3) < 0.02)


def dirichlet_oracle(state, j, signal, topic, shared, n, seed):
    conc = state.config.attention.concentration.copy()
    if shared:
        conc[topic] += 1
    rho = np.random.default_rng(seed).dirichlet(conc, size=n)
    w = rho * state.phi()[j, :, signal]
    return (w / w.sum(axis=1, keepdims=True)).mean(axis=0)


@pytest.mark.parametrize("C", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("shared", [False, True])
@pytest.mark.parametrize("method", [URN, EXPLICIT])
def test_interpretation_sampler_matches_dirichlet_oracle(C, shared, method):
    state = init_society(SocietyConfig(N=4, M=12, S=5, alpha=0.05, lam=0.05, C=C, seed=3))
    advance(state, 3000)
    n_oracle, n = 400_000, 200_000
    p = dirichlet_oracle(state, 1, 2, 3, shared, n_oracle, seed=99)
    q = np.bincount(interpretation_draws(state, 1, 2, 3, shared, n, method), minlength=12) / n
    se = np.sqrt(p * (1 - p) * (1 / n + 1 / n_oracle))
    assert np.max(np.abs(q - p) / np.maximum(se, 1e-12)) < 5


def test_interpretation_draws_rejects_degenerate_attention():
    state = init_society(SocietyConfig(C=0.0))
    with pytest.raises(ValueError):
        interpretation_draws(state, 0, 0, 0, False, 10)


def test_run_series_and_durations():
    state = init_society(SocietyConfig(N=4, M=6, S=3, seed=1))
    assert run(state, 0.0) == []
    series = run(state, 10.0, cadence=3.0)
    assert [r.time for r in series] == pytest.approx([3.0, 6.0, 9.0, 10.0])
    assert state.steps == steps_for(10.0, 4) == 40
    assert len(run(state, 50.0)) == 100


@settings(max_examples=20)
@given(C=st.floats(0, 1), A=st.floats(0, 1), seed=st.integers(0, 1000), fb=st.booleans())
def test_phi_rows_stay_normalised(C, A, seed, fb):
    state = init_society(SocietyConfig(N=3, M=5, S=4, C=C, A=A, feedback=fb, seed=seed))
    advance(state, 2000)
    phi = state.phi()
    assert np.all(phi > 0)
    np.testing.assert_allclose(phi.sum(axis=2), 1.0, atol=1e-12)


def test_subnormal_certainty_falls_back_to_fixed_weights():
    state = init_society(SocietyConfig(N=3, M=5, S=4, C=5e-324, seed=1))
    advance(state, 500)
    np.testing.assert_allclose(state.phi().sum(axis=2), 1.0, atol=1e-12)
