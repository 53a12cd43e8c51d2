"""Parameter-free model of rank polysemy distributions.

Given only a dictionary's word count L and meaning count M, the model
predicts how many words carry k meanings, tests that prediction against
an observed spectrum with a chi-square protocol, and offers a
one-parameter fallback that refits the dictionary size L*.
"""

from ._backend import name as backend_name
from ._backend import set_backend
from .errors import (
    BracketError,
    DataError,
    DegenerateClassError,
    DomainError,
    EmptySpectrumError,
    FitFailureError,
    InfeasibleError,
    InsufficientClassesError,
    NoSolutionError,
    NumericalError,
    ParseError,
    PolysemyError,
    UsageError,
)
from .gof import GofReport, MergedClasses, MergePolicy, chi_square_statistic, merge_classes, p_value, run_test
from .lstar import LstarConfig, LstarFit, apply_exclusion, fit_lstar, modified_totals
from .model import (
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
from .numerics import Bracket, digamma, euler_mascheroni, find_root, regularized_gamma_q
from .simulate import SimConfig, calibrate_pvalues, sample_multinomial, sample_spectrum

__version__ = "0.1.0"
