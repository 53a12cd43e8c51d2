import math
from types import SimpleNamespace

import mpmath
import numpy as np
import pytest
import scipy.special
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_spectrum, harmonic
from polysemy.errors import DataError, DomainError, InfeasibleError
from polysemy.model import (
    DictionaryTotals,
    PolysemySpectrum,
    ZipfFit,
    expected_meanings,
    meanings_total,
    polysemy_pmf,
    predicted_spectrum,
    rank_frequency,
    solve_parameters,
)


def forward_totals(n_words, gamma):
    """M computed directly from the definition, independent of the kernels."""
    total = math.fsum(
        float(scipy.special.digamma((n_words / i) ** gamma + 1.0)) + 0.5772156649015329
        for i in range(1, n_words + 1)
    )
    return DictionaryTotals(n_words, total)


def unit_fit(n_words, gamma=1.0):
    return ZipfFit(gamma, float(n_words) ** gamma, DictionaryTotals(n_words, 10 * n_words), 0.0, 0)


class TestTotals:
    def test_requires_more_meanings_than_words(self):
        with pytest.raises(InfeasibleError):
            DictionaryTotals(100, 100.0)

    def test_requires_two_words(self):
        with pytest.raises(DomainError):
            DictionaryTotals(1, 5.0)

    def test_meanings_stored_as_real(self):
        assert DictionaryTotals(10, 25).meaning_count == 25.0


class TestRankFrequency:
    def test_rarest_word_has_unit_frequency(self):
        fit = unit_fit(1000, 1.37)
        assert rank_frequency(fit, 1000) == pytest.approx(1.0, abs=1e-12)

    def test_gamma_one(self):
        fit = unit_fit(1000)
        assert rank_frequency(fit, 1) == 1000
        assert rank_frequency(fit, 10) == pytest.approx(100)

    @pytest.mark.parametrize("rank", [0, 1001, 2.5])
    def test_rank_domain(self, rank):
        with pytest.raises(DomainError):
            rank_frequency(unit_fit(1000), rank)


class TestExpectedMeanings:
    def test_calibration_points(self):
        assert expected_meanings(1) == pytest.approx(1.0, abs=1e-12)
        assert expected_meanings(0) == pytest.approx(0.0, abs=1e-12)
        assert expected_meanings(10) == pytest.approx(harmonic(10), abs=1e-10)

    def test_negative_frequency(self):
        with pytest.raises(DomainError):
            expected_meanings(-0.5)

    @given(st.floats(0, 1e6), st.floats(1e-6, 1e3))
    def test_strictly_increasing(self, f, step):
        assert expected_meanings(f + step) > expected_meanings(f)


class TestSolve:
    def test_round_trip_gamma_one(self, backend):
        totals = forward_totals(1000, 1.0)
        fit = solve_parameters(totals)
        assert fit.gamma == pytest.approx(1.0, abs=1e-8)
        assert fit.k_const == pytest.approx(1000.0, abs=1e-5)
        assert fit.k_const == float(1000) ** fit.gamma
        assert fit.residual <= 1e-10 * totals.meaning_count

    def test_boundary_is_infeasible(self):
        with pytest.raises(InfeasibleError):
            DictionaryTotals(100, 100.0)
        # the solver re-checks totals that bypassed the constructor
        with pytest.raises(InfeasibleError):
            solve_parameters(SimpleNamespace(word_count=100, meaning_count=100.0))

    def test_limit_towards_zero_gamma(self):
        fit = solve_parameters(DictionaryTotals(2, 2 + 1e-9))
        assert 0 < fit.gamma < 1e-3

    def test_gamma_increases_with_meanings(self):
        gammas = [solve_parameters(DictionaryTotals(300, m)).gamma for m in np.linspace(310, 3000, 25)]
        assert all(b > a for a, b in zip(gammas, gammas[1:]))

    @settings(max_examples=20, deadline=None)
    @given(st.integers(2, 3000), st.floats(0.05, 2.5))
    def test_round_trip_property(self, n_words, gamma):
        totals = DictionaryTotals(n_words, meanings_total(n_words, gamma))
        fit = solve_parameters(totals)
        assert fit.gamma == pytest.approx(gamma, rel=1e-6)
        assert fit.residual <= 1e-10 * totals.meaning_count


class TestPmf:
    def test_degenerate(self):
        assert polysemy_pmf(1, 1) == 1
        assert polysemy_pmf(1, 3) == 0

    def test_m_two(self):
        assert [polysemy_pmf(2, k) for k in (1, 2, 3)] == [0.5, 0.25, 0.125]

    def test_domain(self):
        with pytest.raises(DomainError):
            polysemy_pmf(0.99, 1)
        with pytest.raises(DomainError):
            polysemy_pmf(2.0, 0)

    @pytest.mark.parametrize("m", [1, 1.5, 2, 3, 5, 50])
    def test_normalisation_and_mean(self, m):
        ks = range(1, 4000)
        probs = [polysemy_pmf(m, k) for k in ks]
        assert math.fsum(probs) == pytest.approx(1.0, abs=1e-12)
        assert math.fsum(k * p for k, p in zip(ks, probs)) == pytest.approx(m, rel=1e-10)


class TestPredictedSpectrum:
    def test_conservation(self, backend):
        totals = forward_totals(1000, 1.0)
        spectrum = predicted_spectrum(solve_parameters(totals))
        assert abs(spectrum.total_words() - 1000) <= 1e-6 * 1000
        assert abs(spectrum.total_meanings() - totals.meaning_count) <= 1e-6 * totals.meaning_count
        assert spectrum.kind == "theoretical"
        assert spectrum.k_max == max(spectrum.counts)

    def test_strictly_decreasing(self):
        spectrum = predicted_spectrum(solve_parameters(forward_totals(100, 1.0)))
        values = [spectrum.counts[k] for k in sorted(spectrum.counts)]
        assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("n_words, gamma", [(2, 0.5), (37, 0.8), (100, 1.0), (200, 1.3)])
    def test_matches_brute_force(self, backend, n_words, gamma):
        fit = solve_parameters(DictionaryTotals(n_words, meanings_total(n_words, gamma)))
        spectrum = predicted_spectrum(fit, k_max=30)
        reference = brute_force_spectrum(n_words, fit.gamma, 30, mpmath.digamma)
        for k in range(1, 31):
            assert spectrum.counts[k] == pytest.approx(reference[k - 1], rel=1e-12, abs=1e-300)

    def test_fixed_k_max(self):
        spectrum = predicted_spectrum(solve_parameters(forward_totals(100, 1.0)), k_max=5)
        assert sorted(spectrum.counts) == [1, 2, 3, 4, 5]
        assert spectrum.tail_mass > 0

    def test_deterministic(self):
        fit = solve_parameters(forward_totals(500, 1.1))
        assert predicted_spectrum(fit) == predicted_spectrum(fit)


class TestSpectrum:
    def test_totals(self):
        s = PolysemySpectrum.empirical({1: 100, 2: 40, 3: 10})
        assert s.total_words() == 150
        assert s.total_meanings() == 210

    def test_rejects_fractional_empirical(self):
        with pytest.raises(DataError):
            PolysemySpectrum.empirical({1: 1.5})

    def test_rejects_bad_degree(self):
        with pytest.raises(DataError):
            PolysemySpectrum.empirical({0: 3})

    def test_immutable(self):
        s = PolysemySpectrum.empirical({1: 1})
        with pytest.raises(TypeError):
            s.counts[2] = 5
