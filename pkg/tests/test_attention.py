import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bootcomm.attention import (
    AttentionParams,
    concentration_from_certainty,
    estimate_alignment,
    estimate_certainty,
    sample_attention_pair,
    sample_attention_pairs,
)
from bootcomm.errors import UndefinedStatisticError


@pytest.mark.parametrize(
    "C, M, expected", [(0.5, 10, 0.1), (0.2, 55, 4 / 55), (0.9, 10, 0.1 / 9)]
)
def test_concentration_from_certainty(C, M, expected):
    assert concentration_from_certainty(C, M) == pytest.approx(expected, rel=1e-12)


def test_concentration_vanishes_near_one():
    assert concentration_from_certainty(1 - 1e-9, 4) < 1e-9


@pytest.mark.parametrize("C", [0.0, 1.0, -0.1, 1.2])
def test_concentration_rejects_limits(C):
    with pytest.raises(ValueError):
        concentration_from_certainty(C, 4)


def test_dirichlet_certainty_identity():
    # symmetric Dirichlet variance: sum Var = (1 - 1/M) / (a0 + 1)
    for C, M in [(0.1, 10), (0.5, 7), (0.9, 55)]:
        a0 = concentration_from_certainty(C, M) * M
        sum_var = (1 - 1 / M) / (a0 + 1)
        assert sum_var / (1 - 1 / M) == pytest.approx(C, rel=1e-12)


def test_zero_certainty_is_static(rng):
    p = AttentionParams(M=5, C=0.0, A=0.7)
    for _ in range(20):
        d = sample_attention_pair(p, rng)
        np.testing.assert_array_equal(d.signaller_weights, np.full(5, 0.2))
        np.testing.assert_array_equal(d.receiver_weights, np.full(5, 0.2))


def test_full_certainty_full_alignment_is_common_one_hot(rng):
    p = AttentionParams(M=3, C=1.0, A=1.0)
    for _ in range(50):
        d = sample_attention_pair(p, rng)
        assert d.shared
        assert sorted(d.signaller_weights) == [0.0, 0.0, 1.0]
        np.testing.assert_array_equal(d.signaller_weights, d.receiver_weights)


def test_invalid_params():
    with pytest.raises(ValueError, match="C must lie in"):
        AttentionParams(M=4, C=1.5, A=0.5)
    with pytest.raises(ValueError):
        AttentionParams(M=3, C=0.5, A=0.5, mean_weights=[0.5, 0.5, 0.1])


@given(
    M=st.integers(2, 40),
    C=st.sampled_from([0.0, 0.01, 0.3, 0.9, 0.999, 1.0]),
    A=st.floats(0, 1),
    seed=st.integers(0, 2**32),
)
def test_weights_are_probability_vectors(M, C, A, seed):
    sig, rec, _ = sample_attention_pairs(
        AttentionParams(M=M, C=C, A=A), np.random.default_rng(seed), 20
    )
    for x in (sig, rec):
        assert np.all(x >= 0)
        np.testing.assert_allclose(x.sum(axis=1), 1.0, atol=1e-12, rtol=0)


def test_tiny_concentration_does_not_underflow(rng):
    # a = 1e-5 per component: plain gamma variates would underflow to all-zero
    sig, _, _ = sample_attention_pairs(AttentionParams(M=10, C=1 - 1e-4, A=0.0), rng, 2000)
    assert np.all(np.isfinite(sig))
    np.testing.assert_allclose(sig.sum(axis=1), 1.0, atol=1e-12)


def test_per_meaning_means(rng):
    n, M = 100_000, 10
    sig, rec, _ = sample_attention_pairs(AttentionParams(M=M, C=0.5, A=0.3), rng, n)
    for x in (sig, rec):
        se = x.std(axis=0) / np.sqrt(n)
        assert np.all(np.abs(x.mean(axis=0) - 1 / M) < 3 * se + 1e-12)


@pytest.mark.parametrize("A", [0.0, 0.4, 0.8, 1.0])
def test_shared_flag_frequency(rng, A):
    n = 100_000
    _, _, shared = sample_attention_pairs(AttentionParams(M=6, C=0.3, A=A), rng, n)
    se = np.sqrt(A * (1 - A) / n)
    assert abs(shared.mean() - A) <= 3 * se + 1e-12


@pytest.mark.parametrize("C", [0.1, 0.3, 0.5, 0.9])
def test_certainty_round_trip(rng, C):
    sig, _, _ = sample_attention_pairs(AttentionParams(M=10, C=C, A=0.5), rng, 100_000)
    assert estimate_certainty(sig) == pytest.approx(C, abs=0.02)


@pytest.mark.parametrize("A", [0.0, 0.4, 0.8, 1.0])
def test_alignment_round_trip(rng, A):
    sig, rec, _ = sample_attention_pairs(AttentionParams(M=10, C=0.5, A=A), rng, 100_000)
    assert estimate_alignment(sig, rec) == pytest.approx(A, abs=0.02)


def test_certainty_trivial_cases():
    assert estimate_certainty(np.full((5, 4), 0.25)) == 0.0
    one_hot = np.eye(4)[[0, 1, 2, 3, 0, 1, 2, 3]]
    assert estimate_certainty(one_hot) == pytest.approx(1.0, abs=1e-15)


def test_certainty_undefined_when_fixed_one_hot():
    with pytest.raises(UndefinedStatisticError):
        estimate_certainty(np.tile([1.0, 0.0, 0.0], (5, 1)))


def test_alignment_trivial_cases(rng):
    x = rng.dirichlet(np.ones(4), size=1000)
    assert estimate_alignment(x, x) == pytest.approx(1.0, abs=1e-12)
    y = rng.dirichlet(np.ones(4), size=200_000)
    z = rng.dirichlet(np.ones(4), size=200_000)
    assert estimate_alignment(y, z) == pytest.approx(0.0, abs=0.01)
    with pytest.raises(UndefinedStatisticError):
        estimate_alignment(x, np.full_like(x, 0.25))
