"""Jitted sampling primitives shared by the attention module and the simulation kernel.

All functions take a ``numpy.random.Generator`` so that Python-level and
jitted code draw from one reproducible stream.
"""

import math

import numba
import numpy as np


@numba.njit(cache=True)
def _marsaglia_tsang(rng, shape):
    # shape >= 1
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x = rng.standard_normal()
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = rng.random()
        if u < 1.0 - 0.0331 * x * x * x * x:
            return d * v
        if math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
            return d * v


@numba.njit(cache=True)
def log_gamma_variate(rng, shape):
    """Log of a Gamma(shape, 1) variate.

    Shapes below one use the boost identity G(a) = G(a + 1) * U**(1/a),
    carried out in log space so that tiny shapes do not underflow to zero.
    """
    if shape < 1.0:
        u = rng.random()
        while u == 0.0:
            u = rng.random()
        return math.log(_marsaglia_tsang(rng, shape + 1.0)) + math.log(u) / shape
    return math.log(_marsaglia_tsang(rng, shape))


@numba.njit(cache=True)
def dirichlet_into(rng, concentration, out):
    """Fill ``out`` with a Dirichlet(concentration) draw via normalised gammas."""
    n = concentration.shape[0]
    top = -np.inf
    for k in range(n):
        out[k] = log_gamma_variate(rng, concentration[k])
        if out[k] > top:
            top = out[k]
    total = 0.0
    for k in range(n):
        out[k] = math.exp(out[k] - top)
        total += out[k]
    for k in range(n):
        out[k] /= total


@numba.njit(cache=True)
def categorical(rng, weights, total):
    """Index drawn in proportion to nonnegative ``weights`` summing to ``total``."""
    u = rng.random() * total
    acc = 0.0
    n = weights.shape[0]
    for k in range(n):
        acc += weights[k]
        if u < acc:
            return k
    # rounding left u at or above the running sum: take the last nonzero entry
    for k in range(n - 1, -1, -1):
        if weights[k] > 0.0:
            return k
    return n - 1
