"""Rank-frequency law, expected meanings, parameter solve and predicted spectra."""

import math
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from . import _backend
from .errors import DataError, DomainError, EmptySpectrumError, InfeasibleError, NoSolutionError
from .numerics import EULER_MASCHERONI, Bracket, digamma, find_root_full

GAMMA_START = (1e-6, 4.0)
GAMMA_CAP = 64.0
TAIL_TOL = 1e-6


@dataclass(frozen=True)
class DictionaryTotals:
    """Observed dictionary size: ``word_count`` headwords, ``meaning_count`` meanings."""

    word_count: int
    meaning_count: float

    def __post_init__(self):
        if int(self.word_count) != self.word_count or self.word_count < 2:
            raise DomainError(f"word count must be an integer >= 2, got {self.word_count!r}")
        object.__setattr__(self, "word_count", int(self.word_count))
        object.__setattr__(self, "meaning_count", float(self.meaning_count))
        if not self.meaning_count > self.word_count:
            raise InfeasibleError(
                "meanings total must exceed word total "
                f"(L={self.word_count}, M={self.meaning_count:g})"
            )


@dataclass(frozen=True)
class ZipfFit:
    gamma: float
    k_const: float
    totals: DictionaryTotals
    residual: float
    iterations: int

    @property
    def word_count(self):
        return self.totals.word_count


@dataclass(frozen=True)
class PolysemySpectrum:
    """Word counts per polysemy degree.

    Empirical spectra hold non-negative integer counts; theoretical ones
    hold reals and record where the degree range was truncated
    (``k_max``) together with the probability mass left beyond it.
    """

    counts: MappingProxyType
    kind: str = "empirical"
    k_max: int | None = None
    tail_mass: float = 0.0

    def __post_init__(self):
        if self.kind not in ("empirical", "theoretical"):
            raise ValueError(f"unknown spectrum kind {self.kind!r}")
        clean = {}
        for k, n in sorted(dict(self.counts).items()):
            if int(k) != k or k < 1:
                raise DataError(f"polysemy degree must be a positive integer, got {k!r}")
            n = float(n)
            if not n >= 0 or math.isinf(n):
                raise DataError(f"count for degree {k} must be finite and non-negative, got {n!r}")
            if self.kind == "empirical":
                if n != int(n):
                    raise DataError(f"empirical count for degree {k} is not an integer: {n!r}")
                n = int(n)
            clean[int(k)] = n
        object.__setattr__(self, "counts", MappingProxyType(clean))

    @classmethod
    def empirical(cls, counts):
        return cls(counts, "empirical")

    def degrees(self):
        return list(self.counts)

    def max_degree(self):
        nonzero = [k for k, n in self.counts.items() if n > 0]
        return max(nonzero) if nonzero else 0

    def get(self, k):
        return self.counts.get(k, 0)

    def total_words(self):
        return sum(self.counts.values())

    def total_meanings(self):
        return sum(k * n for k, n in self.counts.items())

    def totals(self):
        if self.total_words() == 0:
            raise EmptySpectrumError("spectrum has no words")
        return DictionaryTotals(self.total_words(), self.total_meanings())

    def as_array(self, k_max=None):
        """Counts for degrees ``1..k_max`` as a dense array."""
        k_max = self.max_degree() if k_max is None else k_max
        return np.array([self.get(k) for k in range(1, k_max + 1)], dtype=np.float64)


def rank_frequency(fit, rank):
    if int(rank) != rank or not 1 <= rank <= fit.word_count:
        raise DomainError(f"rank must be an integer in [1, {fit.word_count}], got {rank!r}")
    return fit.k_const / float(rank) ** fit.gamma


def expected_meanings(freq):
    """Expected number of dictionary meanings for a word of corpus frequency ``freq``."""
    if not freq >= 0:
        raise DomainError(f"frequency must be >= 0, got {freq!r}")
    return digamma(freq + 1.0) + EULER_MASCHERONI


def meanings_total(word_count, gamma):
    """Sum of expected meanings over ranks 1..L with ``K = L**gamma``."""
    return _backend.active.meanings_total(int(word_count), float(gamma))


def solve_parameters(totals, tol=1e-10):
    """Solve the two normalisation conditions for ``(K, gamma)``.

    ``K = L**gamma`` pins the rarest word to frequency one; the remaining
    scalar equation ``sum_i m(F_i) = M`` is increasing in gamma and is
    bracketed from ``[1e-6, 4]``, doubling the upper end up to 64.
    """
    n_words = totals.word_count
    target = totals.meaning_count
    if not target > n_words:
        raise InfeasibleError("meanings total must exceed word total")

    def scaled_residual(gamma):
        return (meanings_total(n_words, gamma) - target) / target

    lo, hi = GAMMA_START
    if scaled_residual(lo) >= 0:
        # at gamma = 0 every frequency is 1, so the residual is exactly L - M < 0
        lo = 0.0
    while scaled_residual(hi) < 0:
        if hi >= GAMMA_CAP:
            raise NoSolutionError(f"no gamma <= {GAMMA_CAP:g} reaches M={target:g} for L={n_words}")
        hi = min(2.0 * hi, GAMMA_CAP)

    res = find_root_full(scaled_residual, Bracket(lo, hi), tol)
    gamma = res.root
    residual = abs(meanings_total(n_words, gamma) - target)
    return ZipfFit(
        gamma=gamma,
        k_const=float(n_words) ** gamma,
        totals=totals,
        residual=residual,
        iterations=res.iterations,
    )


def polysemy_pmf(m, k):
    """Probability that a word with expected meanings ``m`` has exactly ``k``."""
    if not m >= 1:
        raise DomainError(f"expected meanings must be >= 1, got {m!r}")
    if int(k) != k or k < 1:
        raise DomainError(f"degree must be a positive integer, got {k!r}")
    if m == 1:
        return 1.0 if k == 1 else 0.0
    return ((m - 1.0) / m) ** (k - 1) / m


def _auto_cap(m_max):
    ratio = (m_max - 1.0) / m_max
    if ratio <= 0.0:
        return 1
    # beyond the cap each rank leaves word mass r**K and meaning mass
    # r**K * (K + m), both kept under 0.1 * TAIL_TOL
    cap = int(math.ceil(math.log(0.1 * TAIL_TOL) / math.log(ratio)))
    while ratio**cap * (cap + m_max) >= 0.1 * TAIL_TOL:
        cap += 1
    return cap


def predicted_spectrum(fit, k_max=None):
    """Expected word counts per degree, summed over ranks in ascending order.

    With ``k_max=None`` the degree range is extended until the words left
    beyond it fall under ``1e-6 * L`` and the meanings left beyond it fall
    under ``1e-6`` of the model's meaning total.
    """
    n_words = fit.word_count
    m = _backend.active.meanings_by_rank(n_words, fit.gamma)
    if k_max is None:
        counts = _backend.active.spectrum_counts(m, _auto_cap(float(m[0])))
        degrees = np.arange(1, counts.size + 1)
        meanings = float(np.cumsum(m)[-1])
        words_left = n_words - np.cumsum(counts)
        meanings_left = meanings - np.cumsum(degrees * counts)
        done = (words_left < TAIL_TOL * n_words) & (meanings_left < TAIL_TOL * meanings)
        below = np.nonzero(done)[0]
        k_max = int(below[0]) + 1 if below.size else counts.size
        counts = counts[:k_max]
    else:
        if int(k_max) != k_max or k_max < 1:
            raise DomainError(f"k_max must be a positive integer, got {k_max!r}")
        k_max = int(k_max)
        counts = _backend.active.spectrum_counts(m, k_max)
    tail = float(n_words - np.cumsum(counts)[-1])
    return PolysemySpectrum(
        {k + 1: float(n) for k, n in enumerate(counts)},
        "theoretical",
        k_max=k_max,
        tail_mass=tail,
    )
