"""
Gauss hypergeometric function F(a, b; c; x) for complex parameters and real x < 1.

The evaluator maps the argument into the unit interval and keeps the
effective series argument small:
- x < 0: Pfaff map x -> x / (x - 1)
- 0 <= w <= 1/2: direct power series
- 1/2 < w <= 0.9: direct power series, the Euler form when that cancels
- 0.9 < w < 1: 1 - w connection formula with reciprocal gammas

Every double-precision path tracks how much of its result is rounding noise
(summed term magnitudes against the sum, and the two halves of the
connection formula against their difference). When the estimate exceeds
ROUNDING_TOLERANCE, or c - a - b sits on an integer so that the connection
formula degenerates, the value is recomputed with mpmath at FALLBACK_DPS
digits instead of returning a wrong number.

The regularized form F / gamma(c) is built into the series recurrence so it
stays finite, and analytic, when c is a nonpositive integer.
"""

from __future__ import annotations

import cmath
import logging
import math
import sys
from dataclasses import dataclass

import mpmath

from legendre_ep.errors import (
    ConvergenceError,
    DegenerateParameterError,
    DomainError,
    PoleError,
)
from legendre_ep.gamma import gamma, nonpositive_integer, recip_gamma, sinpi

LOG = logging.getLogger(__name__)

TERM_BUDGET = 10_000
TERM_TOLERANCE = 1e-15
DIRECT_LIMIT = 0.5
CONNECTION_LIMIT = 0.9
ROUNDING_TOLERANCE = 1e-11
FALLBACK_DPS = 40
# |sin(pi (c - a - b))| below this makes the connection formula cancel badly
_CONNECTION_SIN_FLOOR = 0.1
# beyond this w the direct series cannot reach TERM_TOLERANCE within TERM_BUDGET
_DEGENERATE_SERIES_LIMIT = math.exp(math.log(TERM_TOLERANCE) / TERM_BUDGET)
# relative accuracy of the reciprocal gamma factors in the connection formula
_GAMMA_ACCURACY = 1e-14


class _PrecisionLoss(Exception):
    """A double-precision path lost more digits than ROUNDING_TOLERANCE allows."""


# double-precision failures that send the public evaluators to mpmath
_FALLBACK_TRIGGERS = (_PrecisionLoss, DegenerateParameterError, ConvergenceError, OverflowError)


@dataclass(frozen=True)
class HypParams:
    """
    Parameters of F(a, b; c; x).

    Attributes:
        a: First numerator parameter
        b: Second numerator parameter
        c: Denominator parameter
        x: Real argument, x < 1
    """

    a: complex
    b: complex
    c: complex
    x: float

    def __post_init__(self):
        if not self.x < 1.0:
            raise DomainError(f"Hypergeometric argument must be < 1: {self.x}")

    def swapped(self) -> "HypParams":
        return HypParams(a=self.b, b=self.a, c=self.c, x=self.x)


def hyp2f1(p: HypParams) -> complex:
    """
    F(a, b; c; x).

    Terminating cases (a or b a nonpositive integer) are summed exactly as
    polynomials.

    Raises:
        PoleError: When c is within 1e-12 of a nonpositive integer
        ConvergenceError: When the mpmath fallback fails as well
    """
    a, b, c = _canonical(p)
    if nonpositive_integer(c) is not None:
        raise PoleError(c, "hypergeometric c at 0, -1, -2, ...; use hyp2f1_regularized")
    try:
        if 0.0 <= p.x <= DIRECT_LIMIT or _terminates(a, b) is not None:
            return _series(a, b, c, p.x, regularized=False)
        return _checked(_evaluate(a, b, c, p.x) * gamma(c))
    except _FALLBACK_TRIGGERS as exc:
        return _high_precision(a, b, c, p.x, regularized=False, reason=exc)


def hyp2f1_regularized(p: HypParams) -> complex:
    """
    F(a, b; c; x) / gamma(c), analytic in c including c = 0, -1, -2, ...

    Raises:
        ConvergenceError: When the mpmath fallback fails as well
    """
    a, b, c = _canonical(p)
    try:
        return _evaluate(a, b, c, p.x)
    except _FALLBACK_TRIGGERS as exc:
        return _high_precision(a, b, c, p.x, regularized=True, reason=exc)


def series_regularized(p: HypParams) -> complex:
    """
    Direct regularized power series at the untransformed argument.

    Valid for |x| < 1 only; used where the term-by-term structure of the
    series matters (each term carries its own 1/gamma(c + k)).

    Raises:
        ConvergenceError: When |x| >= 1 or the term budget is exhausted
    """
    if abs(p.x) >= 1.0 and _terminates(p.a, p.b) is None:
        raise ConvergenceError(f"Power series diverges at |x| >= 1: {p.x}")
    a, b, c = _canonical(p)
    try:
        return _series(a, b, c, p.x, regularized=True)
    except (_PrecisionLoss, OverflowError) as exc:
        return _high_precision(a, b, c, p.x, regularized=True, reason=exc)


def series_plain(p: HypParams) -> complex:
    """
    Direct unregularized power series at the untransformed argument, |x| < 1.

    Stays finite where gamma(c) would overflow or underflow, e.g. for large |c|.

    Raises:
        PoleError: When c is within 1e-12 of a nonpositive integer
        ConvergenceError: When |x| >= 1 or the term budget is exhausted
    """
    if nonpositive_integer(p.c) is not None:
        raise PoleError(p.c, "hypergeometric c at 0, -1, -2, ...")
    if abs(p.x) >= 1.0 and _terminates(p.a, p.b) is None:
        raise ConvergenceError(f"Power series diverges at |x| >= 1: {p.x}")
    a, b, c = _canonical(p)
    try:
        return _series(a, b, c, p.x, regularized=False)
    except (_PrecisionLoss, OverflowError) as exc:
        return _high_precision(a, b, c, p.x, regularized=False, reason=exc)


def transform_region(p: HypParams) -> tuple[HypParams, complex]:
    """
    Map F(p) to prefactor * F(p') by a single-term transformation.

    - x < 0: Pfaff, F(a, b; c; x) = (1 - x)^-a F(a, c - b; c; x / (x - 1))
    - 0 <= x <= 1/2: identity
    - 1/2 < x < 1: Euler, F(a, b; c; x) = (1 - x)^(c - a - b) F(c - a, c - b; c; x)

    The new argument lies in [0, 1/2] for -1 <= x <= 1/2 only. Pfaff sends
    x < -1 into (1/2, 1) and Euler keeps x, so reaching [0, 1/2] from there
    takes the two-term 1 - x connection formula, which the evaluator applies
    itself above w = 0.9. No prefactor here involves a gamma function.

    When the Pfaff map can make the series terminate, the parameter that
    achieves that is kept.

    Example:
        >>> q, pref = transform_region(HypParams(0.5, 1.5, 2.5, -1.0))
        >>> q.x
        0.5
    """
    a, b, c = _canonical(p)
    x = p.x
    if x < 0.0:
        if _terminates(a, c - b) is None and _terminates(b, c - a) is not None:
            a, b = b, a
        log_omx = math.log1p(-x)
        prefactor = cmath.exp(-a * log_omx)
        return HypParams(a=a, b=c - b, c=c, x=x / (x - 1.0)), prefactor
    if x <= DIRECT_LIMIT:
        return HypParams(a=a, b=b, c=c, x=x), 1.0 + 0j
    prefactor = cmath.exp((c - a - b) * math.log1p(-x))
    return HypParams(a=c - a, b=c - b, c=c, x=x), prefactor


def _canonical(p: HypParams) -> tuple[complex, complex, complex]:
    # a <-> b order fixed so F(a, b) and F(b, a) run identical arithmetic
    a, b = sorted((complex(p.a), complex(p.b)), key=lambda z: (z.real, z.imag))
    return a, b, complex(p.c)


def _evaluate(a: complex, b: complex, c: complex, x: float) -> complex:
    if _terminates(a, b) is not None or 0.0 <= x <= DIRECT_LIMIT:
        return _series(a, b, c, x, regularized=True)
    if x < 0.0:
        q, prefactor = transform_region(HypParams(a=a, b=b, c=c, x=x))
        # 1 - w = 1 / (1 - x) exactly, not 1 - w in floating point
        return _checked(prefactor * _unit_interval(q.a, q.b, c, q.x, 1.0 / (1.0 - x)))
    return _unit_interval(a, b, c, x, 1.0 - x)


def _unit_interval(a: complex, b: complex, c: complex, w: float, omw: float) -> complex:
    """Regularized F at 0 <= w < 1 with 1 - w supplied separately."""
    if _terminates(a, b) is not None or w <= DIRECT_LIMIT:
        return _series(a, b, c, w, regularized=True)
    if _terminates(c - a, c - b) is not None:
        return _euler_form(a, b, c, w, omw)
    if w <= CONNECTION_LIMIT:
        try:
            return _series(a, b, c, w, regularized=True)
        except _PrecisionLoss:
            LOG.debug("Direct series cancels, Euler form - a:%s b:%s c:%s w:%s", a, b, c, w)
            return _euler_form(a, b, c, w, omw)
    s = c - a - b
    sin_s = sinpi(s)
    if abs(sin_s) < _CONNECTION_SIN_FLOOR:
        if w > _DEGENERATE_SERIES_LIMIT:
            raise DegenerateParameterError(
                f"Connection prefactor gamma(c - a - b) near a pole and w too close to 1 - "
                f"c-a-b:{s} w:{w}"
            )
        LOG.debug(
            "Connection formula degenerate, direct series - c-a-b:%s w:%s", s, w
        )
        return _series(a, b, c, w, regularized=True)
    first = (
        _series(a, b, a + b - c + 1.0, omw, regularized=True)
        * recip_gamma(c - a)
        * recip_gamma(c - b)
    )
    second = (
        cmath.exp(s * math.log(omw))
        * _series(c - a, c - b, s + 1.0, omw, regularized=True)
        * recip_gamma(a)
        * recip_gamma(b)
    )
    difference = _checked(first - second)
    if (abs(first) + abs(second)) * _GAMMA_ACCURACY > ROUNDING_TOLERANCE * abs(difference):
        raise _PrecisionLoss(
            f"connection formula cancels - terms:{abs(first) + abs(second)} "
            f"difference:{abs(difference)}"
        )
    return math.pi / sin_s * difference


def _euler_form(a: complex, b: complex, c: complex, w: float, omw: float) -> complex:
    """(1 - w)^(c - a - b) F(c - a, c - b; c; w), regularized."""
    euler = cmath.exp((c - a - b) * math.log(omw))
    return _checked(euler * _series(c - a, c - b, c, w, regularized=True))


def _terminates(a: complex, b: complex) -> int | None:
    """Index of the last nonzero term when a or b is a nonpositive integer."""
    stops = [n for n in (nonpositive_integer(a), nonpositive_integer(b)) if n is not None]
    return min(stops) if stops else None


def _checked(value: complex) -> complex:
    if not cmath.isfinite(value):
        raise _PrecisionLoss(f"non-finite intermediate: {value}")
    return value


def _series(
    a: complex,
    b: complex,
    c: complex,
    x: float,
    regularized: bool,
    term_budget: int = TERM_BUDGET,
    tolerance: float = TERM_TOLERANCE,
) -> complex:
    """
    Sum the power series of F (or F / gamma(c)) at x.

    Regularized terms are a_k = (a)_k (b)_k x^k / (k! gamma(c + k)); when
    c = -m the terms k <= m vanish, so summation starts at k0 = m + 1.

    Raises _PrecisionLoss when the summed term magnitudes, scaled by the
    rounding of sqrt(terms) additions, exceed ROUNDING_TOLERANCE of the sum.
    """
    stop = _terminates(a, b)
    k0 = 0
    if regularized:
        m = nonpositive_integer(c)
        if m is not None:
            k0 = m + 1
    if stop is not None and k0 > stop:
        return 0j
    if regularized:
        term = recip_gamma(c + k0)
        for j in range(k0):
            term *= (a + j) * (b + j) * x / (j + 1)
    else:
        term = 1.0 + 0j
    total = term
    mass = abs(term)
    k = k0
    quiet = 0
    while stop is None or k < stop:
        if k - k0 >= term_budget:
            raise ConvergenceError(
                f"Hypergeometric series did not converge in {term_budget} terms - "
                f"a:{a} b:{b} c:{c} x:{x}"
            )
        ratio = (a + k) * (b + k) * x / ((k + 1) * (c + k))
        term *= ratio
        k += 1
        total += term
        magnitude = abs(term)
        if not math.isfinite(magnitude):
            raise _PrecisionLoss(f"series term overflow - a:{a} b:{b} c:{c} x:{x}")
        mass += magnitude
        if stop is None and magnitude <= tolerance * abs(total) and abs(ratio) < 1.0:
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
    noise = mass * math.sqrt(k - k0 + 1) * sys.float_info.epsilon
    if not math.isfinite(mass) or noise > ROUNDING_TOLERANCE * abs(total):
        raise _PrecisionLoss(
            f"series cancellation - mass:{mass} sum:{abs(total)} terms:{k - k0 + 1}"
        )
    return total


def _high_precision(
    a: complex, b: complex, c: complex, x: float, regularized: bool, reason: Exception
) -> complex:
    """F or F / gamma(c) from mpmath at FALLBACK_DPS digits."""
    LOG.debug(
        "Double precision insufficient, mpmath - reason:%s a:%s b:%s c:%s x:%s",
        reason,
        a,
        b,
        c,
        x,
    )
    m = nonpositive_integer(c) if regularized else None
    try:
        with mpmath.workdps(FALLBACK_DPS):
            if m is not None:
                # F / gamma(c) at c = -m starts with the (m + 1)-th term
                n = m + 1
                value = (
                    mpmath.rf(a, n)
                    * mpmath.rf(b, n)
                    * mpmath.power(x, n)
                    / mpmath.factorial(n)
                    * mpmath.hyp2f1(a + n, b + n, n + 1, x)
                )
            else:
                value = mpmath.hyp2f1(a, b, c, x)
                if regularized:
                    value *= mpmath.rgamma(c)
            result = complex(value)
    except (mpmath.libmp.NoConvergence, ZeroDivisionError) as exc:
        raise ConvergenceError(
            f"High-precision hypergeometric failed - a:{a} b:{b} c:{c} x:{x}"
        ) from exc
    if not cmath.isfinite(result):
        raise ConvergenceError(f"Hypergeometric value not finite - a:{a} b:{b} c:{c} x:{x}")
    return result
