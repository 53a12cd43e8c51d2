"""Pure-Python (numpy) implementation of the hot loops.

Used when the compiled ``_ckernels`` extension is unavailable. Every
reduction over ranks runs in ascending rank order (``cumsum`` rather than
pairwise ``sum``) so results match the compiled core to rounding.
"""

import numpy as np

from .numerics import _PSI_COEFFS, _PSI_SHIFT, EULER_MASCHERONI

NAME = "python"

_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)


def digamma_array(x):
    x = np.array(x, dtype=np.float64)
    acc = np.zeros_like(x)
    low = x < _PSI_SHIFT
    while low.any():
        acc[low] -= 1.0 / x[low]
        x[low] += 1.0
        low = x < _PSI_SHIFT
    f = 1.0 / (x * x)
    c = _PSI_COEFFS
    tail = f * (c[0] + f * (c[1] + f * (c[2] + f * (c[3] + f * (c[4] + f * c[5])))))
    return acc + (np.log(x) - 0.5 / x - tail)


def meanings_by_rank(n_words, gamma):
    ranks = np.arange(1, n_words + 1, dtype=np.float64)
    freq = np.power(float(n_words) / ranks, gamma)
    m = digamma_array(freq + 1.0) + EULER_MASCHERONI
    # F >= 1 implies m >= 1; clip the rounding excursion at F == 1
    return np.maximum(m, 1.0)


def meanings_total(n_words, gamma):
    return float(np.cumsum(meanings_by_rank(n_words, gamma))[-1])


def spectrum_counts(m, k_max):
    m = np.asarray(m, dtype=np.float64)
    out = np.empty(k_max, dtype=np.float64)
    p = 1.0 / m
    ratio = (m - 1.0) / m
    for k in range(k_max):
        out[k] = np.cumsum(p)[-1]
        p = p * ratio
    return out


def _splitmix64(z):
    z = z + np.uint64(0x9E3779B97F4A7C15)
    y = z
    y = (y ^ (y >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    y = (y ^ (y >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return y ^ (y >> np.uint64(31))


def uniform_block(seeds, n):
    """``len(seeds) x n`` uniforms in (0, 1], one xorshift64* stream per row."""
    seeds = np.asarray(seeds, dtype=np.uint64)
    out = np.empty((seeds.shape[0], n), dtype=np.float64)
    with np.errstate(over="ignore"):
        state = _splitmix64(seeds)
        state[state == 0] = np.uint64(0x9E3779B97F4A7C15)
        for j in range(n):
            state ^= state >> np.uint64(12)
            state ^= (state << np.uint64(25)) & _MASK64
            state ^= state >> np.uint64(27)
            word = state * np.uint64(0x2545F4914F6CDD1D)
            out[:, j] = ((word >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * 2.0**-53
    return out
