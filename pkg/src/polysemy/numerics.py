"""Scalar special functions and a bracketed root finder.

Everything here is pure and dependency-free; the compiled kernels mirror
:func:`digamma` operation for operation.
"""

import math
from dataclasses import dataclass

from .errors import BracketError, DomainError, NumericalError

EULER_MASCHERONI = 0.5772156649015329

# Asymptotic digamma coefficients B_2n / (2n) for n = 1..6, applied to 1/x^2n.
# Truncation error after lifting to x >= 10 is below 1e-15.
_PSI_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
)
_PSI_SHIFT = 10.0

_GAMMA_EPS = 1e-16
_GAMMA_TINY = 1e-300
_GAMMA_MAX_ITER = 10_000


def euler_mascheroni():
    return EULER_MASCHERONI


def digamma(x):
    """Digamma function for real ``x > 0``.

    Upward recurrence lifts the argument to at least 10, then the asymptotic
    expansion in ``1/x**2`` finishes the job.
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"digamma requires x > 0, got {x!r}")
    acc = 0.0
    while x < _PSI_SHIFT:
        acc -= 1.0 / x
        x += 1.0
    f = 1.0 / (x * x)
    c = _PSI_COEFFS
    tail = f * (c[0] + f * (c[1] + f * (c[2] + f * (c[3] + f * (c[4] + f * c[5])))))
    return acc + (math.log(x) - 0.5 / x - tail)


def _gamma_p_series(s, x):
    term = 1.0 / s
    total = term
    a = s
    for _ in range(_GAMMA_MAX_ITER):
        a += 1.0
        term *= x / a
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            return total * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise NumericalError(f"gamma series did not converge for s={s}, x={x}")


def _gamma_q_contfrac(s, x):
    # modified Lentz evaluation
    b = x + 1.0 - s
    c = 1.0 / _GAMMA_TINY
    d = 1.0 / b
    h = d
    for n in range(1, _GAMMA_MAX_ITER):
        an = -n * (n - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _GAMMA_TINY:
            d = _GAMMA_TINY
        c = b + an / c
        if abs(c) < _GAMMA_TINY:
            c = _GAMMA_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            return h * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise NumericalError(f"gamma continued fraction did not converge for s={s}, x={x}")


def regularized_gamma_q(s, x):
    """Upper regularized incomplete gamma ``Q(s, x) = Gamma(s, x) / Gamma(s)``."""
    s = float(s)
    x = float(x)
    if not (s > 0.0 and x >= 0.0) or math.isinf(s):
        raise DomainError(f"regularized_gamma_q requires s > 0 and x >= 0, got s={s!r}, x={x!r}")
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < s + 1.0:
        q = 1.0 - _gamma_p_series(s, x)
    else:
        q = _gamma_q_contfrac(s, x)
    return min(1.0, max(0.0, q))


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise BracketError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class RootResult:
    root: float
    value: float
    iterations: int


def find_root(f, bracket, tol, max_iter=200):
    """Return a root of ``f`` inside ``bracket``; see :func:`find_root_full`."""
    return find_root_full(f, bracket, tol, max_iter).root


def find_root_full(f, bracket, tol, max_iter=200):
    """Brent's method on a sign-changing bracket.

    Stops once ``|f(x)| <= tol`` or the bracket has shrunk to
    ``1e-14 * max(1, |x|)``. Secant and inverse quadratic steps are taken
    when they stay inside the bracket and shrink fast enough, otherwise
    the step is a bisection.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = float(bracket.lo), float(bracket.hi)
    fa, fb = f(a), f(b)
    if math.isnan(fa) or math.isnan(fb):
        raise NumericalError("function is NaN at a bracket end")
    if abs(fa) <= tol:
        return RootResult(a, fa, 0)
    if abs(fb) <= tol:
        return RootResult(b, fb, 0)
    if (fa > 0) == (fb > 0):
        raise BracketError(f"no sign change on [{a}, {b}]: f(lo)={fa}, f(hi)={fb}")

    c, fc = a, fa
    d = e = b - a
    for it in range(1, max_iter + 1):
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        half_tol = 0.5e-14 * max(1.0, abs(b))
        mid = 0.5 * (c - b)
        if abs(fb) <= tol or abs(mid) <= half_tol:
            return RootResult(b, fb, it)
        if abs(e) >= half_tol and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * mid * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * mid * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * mid * q - abs(half_tol * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = mid
        else:
            d = e = mid
        a, fa = b, fb
        if abs(d) > half_tol:
            b += d
        else:
            b += half_tol if mid > 0 else -half_tol
        fb = f(b)
        if math.isnan(fb):
            raise NumericalError(f"function is NaN at x={b}")
    raise NumericalError(f"root finder did not converge in {max_iter} iterations")
