import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bootcomm.memory import (
    AssociationMemory,
    InteractionHistoryEntry as E,
    batch_posterior_predictive,
    interpretation_distribution,
    production_distribution,
    record_interaction,
)


def replay(history, alpha, lam, S, M):
    mem = AssociationMemory(M, S, alpha, lam)
    for e in history:
        record_interaction(mem, e.meaning, e.signal, e.stored)
    return mem


def test_empty_memory_is_uniform():
    mem = AssociationMemory(M=3, S=12, alpha=0.05, lam=0.01)
    np.testing.assert_allclose(production_distribution(mem, 0), np.full(12, 1 / 12))


def test_one_and_two_stored_entries():
    mem = AssociationMemory(M=2, S=12, alpha=0.05, lam=0.01)
    record_interaction(mem, 0, 3, True)
    assert mem.counts[0, 3] == 1.0 and mem.counts.sum() == 1.0
    phi = production_distribution(mem, 0)
    assert phi[3] == pytest.approx((1 + 0.05 / 12) / 1.05, rel=1e-14)
    assert phi[3] == pytest.approx(0.956349, abs=1e-6)
    assert phi[0] == pytest.approx(0.0039683, abs=1e-7)

    record_interaction(mem, 0, 5, True)
    np.testing.assert_allclose(mem.counts[0, [3, 5]], [0.99, 1.0], rtol=1e-15)
    phi = production_distribution(mem, 0)
    assert phi[3] == pytest.approx(0.487337, abs=1e-6)
    assert phi[5] == pytest.approx(0.492239, abs=1e-6)
    batch = batch_posterior_predictive([E(0, 3, True), E(0, 5, True)], 0.05, 0.01, 12, 2)
    np.testing.assert_allclose(batch[0], phi, rtol=0, atol=1e-15)
    np.testing.assert_allclose(batch[1], np.full(12, 1 / 12))


def test_unstored_decay_reverts_to_uniform():
    lam = 0.01
    mem = AssociationMemory(M=1, S=4, alpha=0.05, lam=lam)
    record_interaction(mem, 0, 0, True)
    for k in range(1, 51):
        record_interaction(mem, 0, 1, False)
    assert mem.counts[0, 0] == pytest.approx(0.99**50, rel=1e-12)
    for _ in range(int(np.ceil(10 / lam)) - 50):
        record_interaction(mem, 0, 1, False)
    assert np.max(np.abs(production_distribution(mem, 0) - 0.25)) < 1e-3


def test_only_one_row_changes():
    mem = AssociationMemory(M=4, S=3, alpha=0.1, lam=0.1)
    mem.counts[:] = 1.0
    record_interaction(mem, 2, 1, True)
    changed = np.any(mem.counts != 1.0, axis=1)
    assert changed.tolist() == [False, False, True, False]


def test_interpretation_examples():
    mem = AssociationMemory(M=3, S=4, alpha=0.1, lam=0.01)
    rho = np.array([0.2, 0.5, 0.3])
    for s in range(4):
        np.testing.assert_allclose(interpretation_distribution(mem, rho, s), rho, atol=1e-15)
    record_interaction(mem, 0, 2, True)
    np.testing.assert_array_equal(
        interpretation_distribution(mem, np.array([0.0, 1.0, 0.0]), 2), [0, 1, 0]
    )


def test_interpretation_arithmetic():
    # phi(s|m0) = 0.9, phi(s|m1) = 0.1 with two signals and alpha chosen to hit them
    alpha = 0.2
    mem = AssociationMemory(M=2, S=2, alpha=alpha, lam=0.01)
    # (n + 0.1) / (n + 0.2) = 0.9 with the other count zero -> n = 0.8
    mem.counts[0] = [0.8, 0.0]
    mem.counts[1] = [0.0, 0.8]
    psi = interpretation_distribution(mem, np.array([0.5, 0.5]), 0)
    np.testing.assert_allclose(psi, [0.9, 0.1], atol=1e-14)


@given(
    seed=st.integers(0, 2**32),
    alpha=st.sampled_from([0.01, 0.05, 0.5]),
    lam=st.sampled_from([0.005, 0.01, 0.1]),
)
def test_incremental_matches_batch(seed, alpha, lam):
    rng = np.random.default_rng(seed)
    M, S = 5, 4
    history = [
        E(int(m), int(s), bool(w))
        for m, s, w in zip(rng.integers(0, M, 100), rng.integers(0, S, 100), rng.random(100) < 0.7)
    ]
    mem = replay(history, alpha, lam, S, M)
    np.testing.assert_allclose(
        mem.phi(), batch_posterior_predictive(history, alpha, lam, S, M), rtol=0, atol=1e-12
    )


@given(
    signals=st.lists(st.tuples(st.integers(0, 5), st.booleans()), max_size=300),
    alpha=st.floats(1e-3, 10),
    lam=st.sampled_from([0.005, 0.05, 0.3]),
    s=st.integers(0, 5),
)
def test_normalization_and_monotone_reinforcement(signals, alpha, lam, s):
    # states reached by replay keep the row total below 1/lam, where the
    # reversion term can never outweigh the loss from decay
    mem = replay([E(0, sig, w) for sig, w in signals], alpha, lam, 6, 1)
    before = production_distribution(mem, 0)
    assert before.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all((before > 0) & (before < 1))
    record_interaction(mem, 0, s, True)
    after = production_distribution(mem, 0)
    assert after.sum() == pytest.approx(1.0, abs=1e-12)
    assert after[s] > before[s]
    others = np.arange(6) != s
    assert np.all(after[others] < before[others])


def test_expected_update_vanishes_at_uniform():
    # average the one-step change over a uniformly drawn signal
    S = 5
    deltas = []
    for s in range(S):
        mem = AssociationMemory(M=1, S=S, alpha=0.3, lam=0.05)
        mem.counts[0] = 2.0  # phi is exactly uniform
        before = production_distribution(mem, 0)
        record_interaction(mem, 0, s, True)
        deltas.append(production_distribution(mem, 0) - before)
    np.testing.assert_allclose(np.mean(deltas, axis=0), 0.0, atol=1e-15)


def test_record_rejects_out_of_range():
    mem = AssociationMemory(M=2, S=2, alpha=0.1, lam=0.1)
    with pytest.raises(IndexError):
        record_interaction(mem, 2, 0, True)
