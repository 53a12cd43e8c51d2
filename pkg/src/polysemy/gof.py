"""Chi-square comparison of an empirical spectrum with the model's prediction."""

from dataclasses import dataclass

from .errors import DataError, DegenerateClassError, EmptySpectrumError, InsufficientClassesError
from .model import PolysemySpectrum, ZipfFit, predicted_spectrum, solve_parameters
from .numerics import regularized_gamma_q


@dataclass(frozen=True)
class MergePolicy:
    """How polysemy degrees are grouped into comparison classes.

    ``exclude_above`` removes words from the dictionary before anything is
    fitted; ``exclude_degrees`` only drops those degrees from the chi-square
    comparison.
    """

    min_class_size: float = 10.0
    explicit_joins: tuple = ()
    exclude_degrees: frozenset = frozenset()
    exclude_above: int | None = None
    merge_by: str = "expected"

    def __post_init__(self):
        if not self.min_class_size > 0:
            raise DataError(f"min_class_size must be positive, got {self.min_class_size!r}")
        if self.merge_by not in ("expected", "observed"):
            raise DataError(f"merge_by must be 'expected' or 'observed', got {self.merge_by!r}")
        joins = tuple(tuple(sorted({int(k) for k in join})) for join in self.explicit_joins)
        seen = set()
        for join in joins:
            if not join or join[0] < 1:
                raise DataError(f"join {join} must contain degrees >= 1")
            if seen & set(join):
                raise DataError(f"explicit joins overlap at {sorted(seen & set(join))}")
            seen |= set(join)
        object.__setattr__(self, "explicit_joins", joins)
        object.__setattr__(self, "exclude_degrees", frozenset(int(k) for k in self.exclude_degrees))
        if self.exclude_above is not None and self.exclude_above < 1:
            raise DataError(f"exclude_above must be >= 1, got {self.exclude_above!r}")

    def retains(self, k):
        if k in self.exclude_degrees:
            return False
        return self.exclude_above is None or k <= self.exclude_above

    def as_dict(self):
        return {
            "min_class_size": self.min_class_size,
            "merge_by": self.merge_by,
            "explicit_joins": [list(j) for j in self.explicit_joins],
            "exclude_degrees": sorted(self.exclude_degrees),
            "exclude_above": self.exclude_above,
        }


@dataclass(frozen=True)
class ComparisonClass:
    degrees: tuple
    observed: float
    expected: float


@dataclass(frozen=True)
class MergedClasses:
    classes: tuple
    # set when some class could not reach the size threshold
    residual_below_threshold: bool = False

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    @property
    def observed(self):
        return [c.observed for c in self.classes]

    @property
    def expected(self):
        return [c.expected for c in self.classes]


@dataclass(frozen=True)
class GofReport:
    chi_square: float
    dof: int
    p_value: float
    classes: MergedClasses
    policy: MergePolicy
    fitted_param_count: int
    fit: ZipfFit | None = None
    observed: PolysemySpectrum | None = None
    expected: PolysemySpectrum | None = None


def _combine(a, b):
    return ComparisonClass(
        tuple(sorted(a.degrees + b.degrees)), a.observed + b.observed, a.expected + b.expected
    )


def merge_units(units, min_size, by="expected"):
    """Tail-first accumulation of adjacent units into classes of size >= ``min_size``.

    ``units`` must be ordered by ascending degree. A leftover run at the low
    end that stays under the threshold is folded into the class above it.
    """
    closed = []
    acc = None
    for unit in reversed(units):
        acc = unit if acc is None else _combine(unit, acc)
        if getattr(acc, by) >= min_size:
            closed.append(acc)
            acc = None
    if acc is not None:
        if closed:
            closed[-1] = _combine(acc, closed[-1])
        else:
            closed.append(acc)
    classes = tuple(reversed(closed))
    short = any(getattr(c, by) < min_size for c in classes)
    return MergedClasses(classes, residual_below_threshold=short)


def merge_classes(observed, expected, policy):
    degrees = sorted(
        k for k in set(observed.counts) | set(expected.counts) if policy.retains(k)
    )
    if not degrees:
        raise InsufficientClassesError("no polysemy degrees left after exclusions")
    retained = set(degrees)
    in_join = {}
    for join in policy.explicit_joins:
        for k in join:
            in_join[k] = join

    units = []
    done = set()
    for k in degrees:
        if k in done:
            continue
        group = [d for d in in_join.get(k, (k,)) if d in retained]
        done.update(group)
        units.append(
            ComparisonClass(
                tuple(group),
                float(sum(observed.get(d) for d in group)),
                float(sum(expected.get(d) for d in group)),
            )
        )
    merged = merge_units(units, policy.min_class_size, policy.merge_by)
    if len(merged) < 2:
        raise InsufficientClassesError(
            f"only {len(merged)} comparison class left after merging; need at least 2"
        )
    return merged


def chi_square_statistic(classes):
    total = 0.0
    for c in classes:
        if not c.expected > 0:
            raise DegenerateClassError(f"class {list(c.degrees)} has expected count {c.expected!r}")
        total += (c.observed - c.expected) ** 2 / c.expected
    return total


def p_value(stat, dof):
    """Upper-tail chi-square probability of ``stat`` with ``dof`` degrees of freedom."""
    if stat < 0:
        raise ValueError(f"chi-square statistic must be >= 0, got {stat!r}")
    if int(dof) != dof or dof < 1:
        raise ValueError(f"dof must be a positive integer, got {dof!r}")
    return regularized_gamma_q(dof / 2.0, stat / 2.0)


def restrict_to(spectrum, cutoff):
    """Drop degrees above ``cutoff``; raises if nothing survives."""
    kept = {k: n for k, n in spectrum.counts.items() if k <= cutoff}
    if not any(n > 0 for n in kept.values()):
        raise EmptySpectrumError(f"no words with at most {cutoff} meanings")
    return PolysemySpectrum(kept, spectrum.kind)


def run_test(observed, policy=None, fitted_param_count=0, totals=None):
    """Fit the model to the observed totals and compare the spectra.

    Passing ``totals`` compares against the model for those totals instead,
    e.g. the generating model of a simulated spectrum. A high ``p_value``
    means the equal-distribution hypothesis can be accepted at any level
    below it; no threshold is applied here.
    """
    policy = MergePolicy() if policy is None else policy
    if policy.exclude_above is not None:
        observed = restrict_to(observed, policy.exclude_above)
    fit = solve_parameters(observed.totals() if totals is None else totals)
    expected = predicted_spectrum(fit)
    if observed.max_degree() > expected.k_max:
        expected = predicted_spectrum(fit, k_max=observed.max_degree())
    classes = merge_classes(observed, expected, policy)
    dof = len(classes) - 1 - fitted_param_count
    if dof < 1:
        raise InsufficientClassesError(
            f"{len(classes)} classes leave no degrees of freedom "
            f"with {fitted_param_count} fitted parameter(s)"
        )
    stat = chi_square_statistic(classes)
    return GofReport(
        chi_square=stat,
        dof=dof,
        p_value=p_value(stat, dof),
        classes=classes,
        policy=policy,
        fitted_param_count=fitted_param_count,
        fit=fit,
        observed=observed,
        expected=expected,
    )
