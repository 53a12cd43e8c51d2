"""One-parameter fallback: refit with a modified dictionary size L*.

The modified dictionary differs from the observed one only in its
monosemous words, so ``M* = M + (L* - L)``. That convention lives in
:func:`modified_totals` alone.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import FitFailureError, InfeasibleError, InsufficientClassesError, NumericalError, UsageError
from .gof import GofReport, MergePolicy, restrict_to, run_test
from .model import DictionaryTotals, PolysemySpectrum

COARSE_POINTS = 64
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LstarConfig:
    search_lo: int
    search_hi: int
    policy: MergePolicy = MergePolicy()
    objective: str = "max_p_value"

    def __post_init__(self):
        if self.objective not in ("max_p_value", "min_chi_square"):
            raise UsageError(f"unknown objective {self.objective!r}")
        if not 1 <= self.search_lo < self.search_hi:
            raise UsageError(
                f"empty L* search range [{self.search_lo}, {self.search_hi}]"
            )


@dataclass(frozen=True)
class LstarFit:
    l_star: int
    modified_totals: DictionaryTotals
    report: GofReport
    objective_trace: tuple
    at_boundary: bool


def apply_exclusion(observed, cutoff):
    """Remove words with more than ``cutoff`` meanings."""
    if int(cutoff) != cutoff or cutoff < 1:
        raise UsageError(f"cutoff must be a positive integer, got {cutoff!r}")
    return restrict_to(observed, cutoff)


def modified_totals(observed_totals, l_star, polysemous_words=None):
    if polysemous_words is not None and not l_star > polysemous_words:
        raise InfeasibleError(
            f"L*={l_star} cannot drop below the {polysemous_words} polysemous words"
        )
    delta = l_star - observed_totals.word_count
    return DictionaryTotals(l_star, observed_totals.meaning_count + delta)


def adjusted_spectrum(observed, l_star):
    """Observed spectrum with the monosemous class resized to reach ``l_star`` words."""
    counts = dict(observed.counts)
    counts[1] = counts.get(1, 0) + (l_star - observed.total_words())
    if counts[1] < 0:
        raise InfeasibleError(f"L*={l_star} would need a negative monosemous count")
    return PolysemySpectrum(counts, observed.kind)


def _integer_grid(lo, hi, points):
    grid = np.unique(np.rint(np.linspace(lo, hi, min(points, hi - lo + 1))).astype(np.int64))
    return [int(x) for x in grid]


def fit_lstar(observed, config):
    """Search integer L* in the configured range for the best chi-square agreement.

    A coarse grid of at most 64 candidates (plus the observed word count when
    it lies in range) is refined by golden-section search around the best
    grid point. Ties go to the smaller L*.
    """
    policy = config.policy
    if policy.exclude_above is not None:
        observed = apply_exclusion(observed, policy.exclude_above)
    n_words = observed.total_words()
    polysemous = n_words - observed.get(1)
    if not config.search_lo > polysemous:
        raise UsageError(
            f"search_lo={config.search_lo} must exceed the {polysemous} polysemous words"
        )
    maximise_p = config.objective == "max_p_value"
    cache = {}

    def evaluate(l_star):
        if l_star not in cache:
            try:
                report = run_test(adjusted_spectrum(observed, l_star), policy, fitted_param_count=1)
            except (InfeasibleError, InsufficientClassesError, NumericalError):
                cache[l_star] = (None, (-math.inf, -math.inf))
            else:
                if maximise_p:
                    key = (report.p_value, -report.chi_square)
                else:
                    key = (-report.chi_square,)
                cache[l_star] = (report, key)
        return cache[l_star][1]

    def better(a, b):
        ka, kb = evaluate(a), evaluate(b)
        return ka > kb or (ka == kb and a < b)

    def best_of(candidates):
        best = candidates[0]
        for c in candidates[1:]:
            if better(c, best):
                best = c
        return best

    lo, hi = config.search_lo, config.search_hi
    grid = _integer_grid(lo, hi, COARSE_POINTS)
    if lo <= n_words <= hi and n_words not in grid:
        grid = sorted(grid + [n_words])
    i = grid.index(best_of(grid))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, len(grid) - 1)]

    while b - a > 3:
        x1 = a + int(round((1.0 - _GOLDEN) * (b - a)))
        x2 = a + int(round(_GOLDEN * (b - a)))
        if x1 >= x2:
            x2 = x1 + 1
        if better(x2, x1):
            a = x1
        else:
            b = x2
    for c in range(a, b + 1):
        evaluate(c)

    best = best_of(sorted(cache))
    report = cache[best][0]
    if report is None:
        raise FitFailureError("objective is non-finite for every L* candidate")
    trace = tuple(
        (c, cache[c][0].p_value if maximise_p else cache[c][0].chi_square)
        if cache[c][0] is not None
        else (c, math.nan)
        for c in sorted(cache)
    )
    return LstarFit(
        l_star=best,
        modified_totals=report.fit.totals,
        report=report,
        objective_trace=trace,
        at_boundary=best in (lo, hi),
    )
