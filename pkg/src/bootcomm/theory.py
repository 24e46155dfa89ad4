"""Closed-form predictions for the three regimes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

FEEDBACK = "feedback"
NO_FEEDBACK = "no_feedback"


def dominant_count_pmf(S: int, M: int) -> np.ndarray:
    """P(D) for D = 0..S distinct signals when each of M meanings gets a uniform random signal.

    The inclusion-exclusion sum alternates in sign and cancels badly in floating
    point, so it is evaluated exactly in integers and divided once at the end.
    """
    if S < 1 or M < 1:
        raise ValueError("S and M must be positive")
    denom = S**M
    out = np.zeros(S + 1)
    for D in range(1, S + 1):
        surj = sum((-1) ** k * math.comb(D, k) * (D - k) ** M for k in range(D + 1))
        out[D] = float(Fraction(math.comb(S, D) * surj, denom))
    return out


def variability_estimate(lam: float, alpha: float, C: float, A: float, M: int) -> float:
    """Across-agent variability expected near the non-communicative state."""
    p_s = A * C + (1.0 - A * C) / M
    return lam / (lam + 2.0 * p_s * (1.0 + lam * alpha))


def threshold_gamma(mode: str, *, M: int, C: float = 0.0, A: float = 1.0,
                    lam: float | None = None, alpha: float | None = None,
                    V: float | None = None) -> float:
    """Instability threshold for the mutation rate ``lam * alpha``.

    In the no-feedback mode ``V`` defaults to :func:`variability_estimate`,
    which needs ``lam`` and ``alpha``; pass a measured ``V`` to override it.
    """
    if mode == FEEDBACK:
        return 1.0 / M
    if mode != NO_FEEDBACK:
        raise ValueError(f"unknown mode {mode!r}")
    if V is None:
        if lam is None or alpha is None:
            raise ValueError("no_feedback threshold needs V or (lam, alpha)")
        V = variability_estimate(lam, alpha, C, A, M)
    if not 0.0 <= V < 1.0:
        raise ValueError(f"V must lie in [0,1), got {V}")
    return C * (1.0 - V) * (A - (1.0 - V) / (1.0 + V))


def communicative_fixed_point(lambda_alpha: float, gamma: float, S: int) -> float | None:
    if S < 2:
        raise ValueError("S must be at least 2")
    if gamma <= 0:
        return None
    disc = 1.0 - 4.0 * lambda_alpha * (S - 1) / (gamma * S * S)
    if disc < 0:
        return None
    return 0.5 * (1.0 + math.sqrt(disc))


def predicted_gain(x: float, S: int) -> float:
    """Gain of a symmetric system whose preferred signals have frequency ``x``."""
    return (S * (x * x + (1.0 - x) ** 2 / (S - 1)) - 1.0) / (S - 1)


@dataclass(frozen=True)
class RegimeReport:
    gamma: float
    lambda_alpha: float
    x_c: float | None
    noncomm_unstable: bool
    comm_exists: bool
    bistable: bool
    predicted_gain: float | None

    @property
    def label(self) -> str:
        if self.bistable:
            return "bistable"
        if self.noncomm_unstable:
            return "communicative"
        return "noncommunicative"


def classify_regime(lambda_alpha: float, gamma: float, S: int) -> RegimeReport:
    x_c = communicative_fixed_point(lambda_alpha, gamma, S)
    comm = gamma > 0 and lambda_alpha < gamma * S * S / (4.0 * (S - 1))
    if not comm:
        # the saddle-node point itself is not counted as an existing stable state
        x_c = None
    unstable = lambda_alpha < gamma
    return RegimeReport(
        gamma=gamma,
        lambda_alpha=lambda_alpha,
        x_c=x_c,
        noncomm_unstable=unstable,
        comm_exists=comm,
        bistable=comm and not unstable,
        predicted_gain=None if x_c is None else predicted_gain(x_c, S),
    )


def symmetric_beta(x: float, S: int, M: int) -> float:
    return S / M * (x * x + (1.0 - x) ** 2 / (S - 1))


def symmetric_rhs(x: float, lam: float, alpha: float, gamma: float, S: int, M: int,
                  feedback: bool) -> float:
    """Deterministic drift of the preferred-signal frequency in a symmetric system."""
    la = lam * alpha
    beta = symmetric_beta(x, S, M) if feedback else 1.0
    selection = gamma * S * S / (S - 1) * x * (1.0 - x) - la
    return lam / (beta + la) / M * selection * (x - 1.0 / S)


def two_agent_dynamics(phi_plus: float, phi_minus: float, C: float, lam: float,
                       alpha: float, M: int) -> tuple[float, float, float | None]:
    """Drift of two fully aligned agents' majority-signal frequencies with two signals.

    Returns (d phi_plus/dt, d phi_minus/dt, growth threshold on eps**2); the
    threshold is None when C == 0.
    """
    la = lam * alpha
    k = lam / (1.0 + la) / M
    eps = 0.5 * (phi_plus - phi_minus)
    dp = k * (-4.0 * C * eps * phi_plus * (1.0 - phi_plus) + la * (0.5 - phi_plus))
    dm = k * (4.0 * C * eps * phi_minus * (1.0 - phi_minus) + la * (0.5 - phi_minus))
    threshold = la / (8.0 * C) if C > 0 else None
    return dp, dm, threshold


def two_agent_mean_rate(phi_plus: float, phi_minus: float, C: float, lam: float,
                        alpha: float, M: int) -> float:
    """Closed form for d/dt of the two-agent mean frequency."""
    la = lam * alpha
    eps = 0.5 * (phi_plus - phi_minus)
    mean = 0.5 * (phi_plus + phi_minus)
    return lam / (1.0 + la) / M * (8.0 * C * eps * eps - la) * (mean - 0.5)


def integrate_two_agent(phi_plus: float, phi_minus: float, C: float, lam: float,
                        alpha: float, M: int, t_end: float, n_eval: int = 2):
    """Integrate the two-agent equations; returns (times, phi_plus(t), phi_minus(t))."""

    def rhs(_t, y):
        dp, dm, _ = two_agent_dynamics(y[0], y[1], C, lam, alpha, M)
        return [dp, dm]

    sol = solve_ivp(rhs, (0.0, t_end), [phi_plus, phi_minus], method="DOP853",
                    t_eval=np.linspace(0.0, t_end, n_eval), rtol=1e-12, atol=1e-15)
    return sol.t, sol.y[0], sol.y[1]
