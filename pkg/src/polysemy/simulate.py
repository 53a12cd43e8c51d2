"""Monte Carlo draws of synthetic dictionaries from a fitted model.

Random numbers come from xorshift64* (shifts 12, 25, 27; output multiplier
0x2545F4914F6CDD1D). Replicate ``r`` of a run seeded with ``s`` starts from
``splitmix64(s + r)``, so every replicate is reproducible on its own.
A 64-bit output ``w`` becomes the uniform ``((w >> 11) + 1) / 2**53`` in (0, 1].
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .gof import run_test
from .model import PolysemySpectrum

_MASK64 = (1 << 64) - 1
# bounds memory of one uniform block to about 32 MiB
_BLOCK_CELLS = 1 << 22


@dataclass(frozen=True)
class SimConfig:
    seed: int
    replicates: int
    fit: object

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates!r}")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def replicate_seeds(seed, replicates):
    return np.array([(seed + r) & _MASK64 for r in range(replicates)], dtype=np.uint64)


def uniforms(seed, replicates, n):
    """``replicates x n`` uniforms; row ``r`` is the stream of replicate ``r``."""
    return _backend.active.uniform_block(replicate_seeds(seed, replicates), n)


def geometric_degrees(m, u):
    """Inverse-CDF draw of polysemy degrees for expected meanings ``m``."""
    m = np.asarray(m, dtype=np.float64)
    with np.errstate(divide="ignore"):
        log_ratio = np.log((m - 1.0) / m)
    degrees = np.ones(np.broadcast(m, u).shape, dtype=np.int64)
    live = np.broadcast_to(m > 1.0, degrees.shape)
    k = 1.0 + np.floor(np.log(u) / np.where(m > 1.0, log_ratio, -1.0))
    degrees[live] = k[live].astype(np.int64)
    return degrees


def _blocks(replicates, width):
    step = max(1, _BLOCK_CELLS // max(width, 1))
    for start in range(0, replicates, step):
        yield start, min(step, replicates - start)


def _to_spectra(draws):
    spectra = []
    for row in draws:
        tally = np.bincount(row)
        spectra.append(
            PolysemySpectrum({k: int(n) for k, n in enumerate(tally) if k >= 1 and n > 0})
        )
    return spectra


def sample_spectrum(config):
    """One empirical spectrum per replicate, one geometric draw per rank."""
    m = _backend.active.meanings_by_rank(config.fit.word_count, config.fit.gamma)
    spectra = []
    for start, count in _blocks(config.replicates, m.size):
        u = uniforms(config.seed + start, count, m.size)
        spectra.extend(_to_spectra(geometric_degrees(m, u)))
    return spectra


def sample_multinomial(spectrum, n_words, seed, replicates):
    """Draw ``n_words`` words i.i.d. from the normalised ``spectrum``."""
    degrees = np.array(sorted(spectrum.counts), dtype=np.int64)
    weights = np.array([spectrum.counts[k] for k in degrees], dtype=np.float64)
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    cdf[-1] = 1.0
    spectra = []
    for start, count in _blocks(replicates, n_words):
        u = uniforms(seed + start, count, n_words)
        picks = np.minimum(np.searchsorted(cdf, u, side="left"), degrees.size - 1)
        spectra.extend(_to_spectra(degrees[picks]))
    return spectra


def calibrate_pvalues(config, policy=None):
    """P values of sampled spectra, each tested against the generating model's totals."""
    totals = config.fit.totals
    return [run_test(s, policy, totals=totals).p_value for s in sample_spectrum(config)]


def replicate_summary(spectra):
    """Per-degree mean and standard error of the mean across replicates."""
    k_max = max(s.max_degree() for s in spectra)
    table = np.array([s.as_array(k_max) for s in spectra])
    mean = table.mean(axis=0)
    if len(spectra) > 1:
        se = table.std(axis=0, ddof=1) / np.sqrt(len(spectra))
    else:
        se = np.full(k_max, np.nan)
    return mean, se
