"""
Normalization integral of the conical functions,

    I(K, rho) = integral over tau in [0, inf) of |Q^{-1/2-K}_{-1/2+i tau}(cosh rho)|^2,

computed by real-axis quadrature with an analytic large-tau tail, by the
residue series from closing the contour in the upper half plane, and, at the
K = 0 exceptional point, through the epsilon-regularized form whose single
surviving pole gives pi^2 / (4 epsilon sinh rho).
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import mpmath
import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate

from legendre_ep.errors import ConvergenceError, DivergenceError, DomainError
from legendre_ep.gamma import log_gamma
from legendre_ep.hyp2f1 import HypParams, hyp2f1, series_plain

LOG = logging.getLogger(__name__)

INTEGER_TOLERANCE = 1e-9
DEFAULT_TOLERANCE = 1e-10
TAIL_SWITCH = 20.0
MAX_TAIL_DOUBLINGS = 8
PANEL_LIMIT = 4000
SCALE_FLOOR = 1e-6
SERIES_DIRECT_TERMS = 400
SERIES_FIT_DEGREE = 3
SERIES_STALL_WINDOW = 50
IMAGINARY_TOLERANCE = 1e-9
_PLAIN_SERIES_LIMIT = 0.9
_ROUNDOFF_MARKER = "roundoff"


@dataclass(frozen=True)
class QuadratureResult:
    """
    Real-axis quadrature of the normalization integral.

    Attributes:
        value: Integral over [0, tail_cut] plus the analytic tail beyond it
        abs_error_estimate: Panel error plus tail-model error
        evaluations: Number of integrand evaluations
        tail_cut: Point T where the analytic tail takes over
    """

    value: float
    abs_error_estimate: float
    evaluations: int
    tail_cut: float


@dataclass(frozen=True)
class ResidueSeriesResult:
    """
    Upper-half-plane residue series.

    Attributes:
        value: Real part of the summed series
        terms_used: Terms summed directly
        last_term_magnitude: |term| of the last directly summed term
        imaginary_residual: |Im sum| / |Re sum|
        tail_estimate: Fitted remainder beyond the direct terms (0 when not needed)
    """

    value: float
    terms_used: int
    last_term_magnitude: float
    imaginary_residual: float
    tail_estimate: float


@dataclass(frozen=True)
class RegularizedK0:
    analytic: float
    numeric: QuadratureResult

    @property
    def relative_error(self) -> float:
        return abs(self.numeric.value - self.analytic) / self.analytic


@dataclass(frozen=True)
class CollapseRow:
    """
    One row of the K = -epsilon collapse table, in units of the integral.

    Attributes:
        epsilon: Regulator, K = -epsilon
        n0_term: Contribution of the n = 0 pole
        tail_sum: Contribution of all n >= 1 poles
        ratio: (n0_term + tail_sum) / (pi^2 / (4 epsilon sinh rho))
    """

    epsilon: float
    n0_term: float
    tail_sum: float
    ratio: float


@dataclass(frozen=True)
class TailCheck:
    T: float
    analytic: float
    numeric: float

    @property
    def relative_error(self) -> float:
        return abs(self.analytic - self.numeric) / abs(self.numeric)


def _check_rho(rho: float):
    if not rho > 0.0 or math.isinf(rho):
        raise DomainError(f"rho must be positive and finite: {rho}")


def _nonnegative_integer(K: float) -> bool:
    return K > -INTEGER_TOLERANCE and abs(K - round(K)) <= INTEGER_TOLERANCE


def _coth_argument(rho: float) -> float:
    """(1 - coth rho) / 2 without cancellation."""
    return -1.0 / math.expm1(2.0 * rho)


def _hyp(a: complex, b: complex, c: complex, x: float) -> complex:
    params = HypParams(a=a, b=b, c=c, x=x)
    if abs(x) < _PLAIN_SERIES_LIMIT:
        return series_plain(params)
    return hyp2f1(params)


def product_form(K: float, tau: float, rho: float) -> complex:
    """
    |Q^{-1/2-K}_{-1/2+i tau}(cosh rho)|^2 in product form, as the complex number
    the arithmetic produces,

        (pi / (2 sinh rho)) gamma(i tau - K) gamma(-i tau - K)
        * P^{-i tau}_K(coth rho) P^{i tau}_K(coth rho).

    The (coth rho + 1)/(coth rho - 1) prefactors of the two P factors cancel;
    the gamma quotient is formed in log space so large tau neither overflows
    nor underflows. The factors come in conjugate pairs, so the imaginary
    part is rounding noise.

    Raises:
        PoleError: At tau = 0 when K is a nonnegative integer
    """
    _check_rho(rho)
    it = 1j * tau
    log_ratio = (
        log_gamma(it - K)
        + log_gamma(-it - K)
        - log_gamma(1.0 + it)
        - log_gamma(1.0 - it)
    )
    x = _coth_argument(rho)
    product = _hyp(-K, K + 1.0, 1.0 + it, x) * _hyp(-K, K + 1.0, 1.0 - it, x)
    return math.pi / (2.0 * math.sinh(rho)) * cmath.exp(log_ratio) * product


def integrand(K: float, tau: float, rho: float) -> float:
    """
    The real normalization integrand, product_form with its imaginary part
    checked and dropped.

    Raises:
        PoleError: At tau = 0 when K is a nonnegative integer
        ConvergenceError: When the imaginary part exceeds 1e-9 relative
    """
    value = product_form(K, tau, rho)
    if abs(value.imag) > IMAGINARY_TOLERANCE * abs(value):
        raise ConvergenceError(
            f"Integrand not real - K:{K} tau:{tau} rho:{rho} value:{value}"
        )
    return value.real


def adaptive_quadrature(
    f: Callable[[float], float],
    breakpoints: Iterable[float],
    tol: float,
    panel_limit: int = PANEL_LIMIT,
) -> tuple[float, float, int]:
    """
    Globally adaptive Gauss-Kronrod quadrature (QUADPACK through scipy) from
    the first to the last breakpoint, with the interior breakpoints passed on
    as known features of the integrand.

    Returns (value, error estimate, evaluations).

    Raises:
        ConvergenceError: When panel_limit subintervals do not reach tol
    """
    points = list(breakpoints)
    if len(points) < 2:
        raise DomainError(f"Quadrature needs at least two breakpoints: {points}")
    interior = points[1:-1] or None
    value, error, info, *message = integrate.quad(
        f,
        points[0],
        points[-1],
        epsabs=tol,
        epsrel=0.0,
        limit=max(panel_limit, len(points) + 1),
        points=interior,
        full_output=1,
    )
    evaluations = int(info["neval"])
    if message:
        # roundoff flags mean the estimate is as good as double precision allows
        if error > tol and _ROUNDOFF_MARKER not in message[0].lower():
            raise ConvergenceError(
                f"Quadrature did not reach tolerance - tol:{tol} error:{error} "
                f"evaluations:{evaluations} {message[0]}"
            )
        LOG.debug("Quadrature flagged - error:%s tol:%s %s", error, tol, message[0])
    return float(value), float(error), evaluations


def _geometric_breakpoints(scale: float, end: float, start: float = 0.0) -> list[float]:
    points = [start]
    edge = scale
    while edge < end:
        if edge > start:
            points.append(edge)
        edge *= 2.0
    points.append(end)
    return points


def _check_quadrature_domain(K: float):
    if K <= -0.5:
        raise DivergenceError(f"Normalization integral diverges at large tau for K <= -1/2: {K}")
    if _nonnegative_integer(K):
        raise DivergenceError(
            f"Normalization integral diverges at tau = 0 for integer K >= 0: {K}"
        )


def _tail_integral(amplitude: float, p: float, correction: float, T: float) -> float:
    """Integral of amplitude * tau^(-p-1) * (1 + correction / tau^2) over [T, inf)."""
    return amplitude * (T**-p / p + correction * T ** (-p - 2.0) / (p + 2.0))


def _fit_correction(amplitude: float, p: float, segment: float, T: float) -> float:
    """Correction c that makes the tail model reproduce the segment integral on [T, 2T]."""
    leading = amplitude * (T**-p - (2.0 * T) ** -p) / p
    shape = amplitude * (T ** (-p - 2.0) - (2.0 * T) ** (-p - 2.0)) / (p + 2.0)
    return (segment - leading) / shape


def _tail_quadrature(
    f: Callable[[float], float],
    body: float,
    body_error: float,
    evaluations: int,
    amplitude: float,
    p: float,
    T: float,
    tol: float,
) -> QuadratureResult:
    """Extend a quadrature over [0, T] by fitted analytic tails, doubling T until the fit settles."""
    previous = None
    for _ in range(MAX_TAIL_DOUBLINGS):
        segment, segment_error, used = adaptive_quadrature(
            f, [T, 1.5 * T, 2.0 * T], tol / 10.0
        )
        evaluations += used
        correction = _fit_correction(amplitude, p, segment, T)
        if previous is not None:
            model_error = (
                abs(correction - previous) * amplitude * (2.0 * T) ** (-p - 2.0) / (p + 2.0)
            )
            LOG.debug(
                "Tail fit - T:%s correction:%s model_error:%s", 2.0 * T, correction, model_error
            )
            if model_error <= tol / 10.0:
                value = body + segment + _tail_integral(amplitude, p, correction, 2.0 * T)
                return QuadratureResult(
                    value=value,
                    abs_error_estimate=body_error + segment_error + model_error,
                    evaluations=evaluations,
                    tail_cut=2.0 * T,
                )
        previous = correction
        body += segment
        body_error += segment_error
        T *= 2.0
    raise ConvergenceError(f"Tail fit did not settle by T = {T}")


def norm_quadrature(
    K: float,
    rho: float,
    tol: float = DEFAULT_TOLERANCE,
    tail_switch: float = TAIL_SWITCH,
) -> QuadratureResult:
    """
    I(K, rho) by adaptive quadrature on [0, T] plus the large-tau tail
    (pi / (2 sinh rho)) tau^(-2-2K) (1 + c / tau^2), c fitted on [T, 2T].

    Raises:
        DivergenceError: For K <= -1/2 or K a nonnegative integer
        ConvergenceError: When the tolerance is not met
    """
    _check_rho(rho)
    _check_quadrature_domain(K)
    # width of the tau = 0 feature set by the nearest gamma pole
    scale = max(min(1.0, abs(K)), SCALE_FLOOR)
    f = lambda tau: integrand(K, tau, rho)
    body, body_error, evaluations = adaptive_quadrature(
        f, _geometric_breakpoints(scale, tail_switch), tol / 2.0
    )
    result = _tail_quadrature(
        f,
        body,
        body_error,
        evaluations,
        amplitude=math.pi / (2.0 * math.sinh(rho)),
        p=1.0 + 2.0 * K,
        T=tail_switch,
        tol=tol,
    )
    LOG.debug(
        "Quadrature - K:%s rho:%s value:%s error:%s evaluations:%s",
        K,
        rho,
        result.value,
        result.abs_error_estimate,
        result.evaluations,
    )
    if not result.value > 0.0:
        raise ConvergenceError(f"Quadrature produced a nonpositive value: {result.value}")
    return result


def norm_full_line(
    K: float,
    rho: float,
    tol: float = DEFAULT_TOLERANCE,
    tail_switch: float = TAIL_SWITCH,
) -> QuadratureResult:
    """
    Half-weight form over (-inf, inf): both half lines integrated separately,
    each with its own tail, then halved. Equals norm_quadrature by evenness.
    """
    _check_rho(rho)
    _check_quadrature_domain(K)
    scale = max(min(1.0, abs(K)), SCALE_FLOOR)
    amplitude = math.pi / (2.0 * math.sinh(rho))
    halves = []
    for sign in (1.0, -1.0):
        f = lambda tau, sign=sign: integrand(K, sign * tau, rho)
        body, body_error, evaluations = adaptive_quadrature(
            f, _geometric_breakpoints(scale, tail_switch), tol / 2.0
        )
        halves.append(
            _tail_quadrature(
                f, body, body_error, evaluations, amplitude, 1.0 + 2.0 * K, tail_switch, tol
            )
        )
    return QuadratureResult(
        value=0.5 * (halves[0].value + halves[1].value),
        abs_error_estimate=0.5 * (halves[0].abs_error_estimate + halves[1].abs_error_estimate),
        evaluations=halves[0].evaluations + halves[1].evaluations,
        tail_cut=max(halves[0].tail_cut, halves[1].tail_cut),
    )


def tail_check(K: float, rho: float, T: float = TAIL_SWITCH, tol: float = 1e-12) -> TailCheck:
    """
    Leading analytic tail (pi / (2 sinh rho)) T^(-1-2K) / (1 + 2K) against
    quadrature on [T, 4T] plus the leading tail beyond 4T.
    """
    _check_rho(rho)
    _check_quadrature_domain(K)
    amplitude = math.pi / (2.0 * math.sinh(rho))
    p = 1.0 + 2.0 * K
    segment, _, _ = adaptive_quadrature(
        lambda tau: integrand(K, tau, rho), [T, 2.0 * T, 4.0 * T], tol
    )
    return TailCheck(
        T=T,
        analytic=_tail_integral(amplitude, p, 0.0, T),
        numeric=segment + _tail_integral(amplitude, p, 0.0, 4.0 * T),
    )


def residue_series_term(K: float, n: int, rho: float) -> complex:
    """
    n-th term of the residue series without the pi^2 / (2 sinh rho) prefactor,

        (-1)^n / n! gamma(n - 2K) P^{K-n}_K(coth rho) P^{n-K}_K(coth rho)
        = -(sin(pi K) / pi) gamma(n - 2K) gamma(n - K) / (n! gamma(n + 1 - K))
          * F(-K, K + 1; n + 1 - K; x) F(-K, K + 1; 1 + K - n; x),

    x = (1 - coth rho) / 2. The opposite-order prefactors of the two P factors
    cancel exactly and the gamma quotient is accumulated in log space.
    """
    x = _coth_argument(rho)
    log_magnitude = (
        log_gamma(n - 2.0 * K)
        + log_gamma(n - K)
        - math.lgamma(n + 1.0)
        - log_gamma(n + 1.0 - K)
    )
    factors = _hyp(-K, K + 1.0, n + 1.0 - K, x) * _hyp(-K, K + 1.0, 1.0 + K - n, x)
    return -math.sin(math.pi * K) / math.pi * cmath.exp(log_magnitude) * factors


def _series_tail(K: float, rho: float, terms: dict[int, complex], last: int) -> float:
    """
    Remainder sum over n > last from a fit of term_n * n^(2 + 2K) as a
    polynomial in 1/n, summed with Hurwitz zeta values.
    """
    exponent = 2.0 + 2.0 * K
    indices = np.arange(last // 2, last + 1)
    scaled = np.array([terms[n].real * n**exponent for n in indices])
    fit = Polynomial.fit(1.0 / indices, scaled, SERIES_FIT_DEGREE).convert()
    LOG.debug(
        "Series tail fit - K:%s leading:%s expected:%s",
        K,
        fit.coef[0],
        -math.sin(math.pi * K) / math.pi,
    )
    return math.fsum(
        float(c) * float(mpmath.zeta(exponent + j, last + 1)) for j, c in enumerate(fit.coef)
    )


def _sign_for_pole(K: float, n: int, extended: bool) -> float:
    # for K > 0 the poles n < K lie in the lower half plane; their upper
    # half plane partners from gamma(-i tau - K) carry the opposite residue
    if extended and n < K:
        return -1.0
    return 1.0


def norm_residue_series(
    K: float,
    rho: float,
    tol: float = DEFAULT_TOLERANCE,
    extended: bool = False,
    max_terms: int = SERIES_DIRECT_TERMS,
) -> ResidueSeriesResult:
    """
    I(K, rho) = (pi^2 / (2 sinh rho)) * sum over the upper half plane poles.

    Terms are summed until |term| < tol * |sum| twice in a row, or until
    max_terms, after which a fitted remainder is added. Valid for
    -1/2 < K < 0; extended=True also admits noninteger K > 0 with 2K not an
    integer.

    Raises:
        DomainError: Outside the supported K range
        ConvergenceError: When term magnitudes stop decreasing
    """
    _check_rho(rho)
    if extended:
        _check_quadrature_domain(K)
        if abs(2.0 * K - round(2.0 * K)) <= INTEGER_TOLERANCE:
            raise DomainError(f"Residue series has double poles when 2K is an integer: {K}")
    elif not -0.5 < K < 0.0:
        raise DomainError(f"Residue series needs -1/2 < K < 0 (or extended=True): {K}")
    terms: dict[int, complex] = {}
    total = 0j
    quiet = 0
    n = 0
    for n in range(max_terms + 1):
        term = _sign_for_pole(K, n, extended) * residue_series_term(K, n, rho)
        terms[n] = term
        total += term
        if n >= SERIES_STALL_WINDOW and abs(term) >= abs(terms[n - SERIES_STALL_WINDOW]):
            raise ConvergenceError(
                f"Residue series terms not decreasing - K:{K} n:{n} term:{abs(term)}"
            )
        if abs(term) < tol * abs(total):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
    tail = 0.0
    if quiet < 2:
        tail = _series_tail(K, rho, terms, n)
    prefactor = math.pi**2 / (2.0 * math.sinh(rho))
    value = prefactor * (total.real + tail)
    imaginary = abs(total.imag) / abs(total.real) if total.real else math.inf
    if imaginary > IMAGINARY_TOLERANCE:
        LOG.warning("Residue series imaginary residual - K:%s residual:%s", K, imaginary)
    LOG.debug("Residue series - K:%s rho:%s terms:%s tail:%s", K, rho, n + 1, tail)
    return ResidueSeriesResult(
        value=value,
        terms_used=n + 1,
        last_term_magnitude=prefactor * abs(terms[n]),
        imaginary_residual=imaginary,
        tail_estimate=prefactor * tail,
    )


def regularized_k0_analytic(rho: float, epsilon: float) -> float:
    """pi^2 / (4 epsilon sinh rho), the single n = 0 pole contribution."""
    return math.pi**2 / (4.0 * epsilon * math.sinh(rho))


def lorentzian_quadrature(
    rho: float, epsilon: float, tol: float, full_line: bool = False
) -> QuadratureResult:
    """
    (pi / (2 sinh rho)) times the integral of 1 / (tau^2 + epsilon^2), over
    [0, inf) or with half weight over (-inf, inf). The tail beyond T is the
    exact arctangent remainder.
    """
    amplitude = math.pi / (2.0 * math.sinh(rho))
    f = lambda tau: amplitude / (tau * tau + epsilon * epsilon)
    T = max(TAIL_SWITCH, 100.0 * epsilon)
    points = _geometric_breakpoints(epsilon, T)
    if full_line:
        points = [-p for p in reversed(points[1:])] + points
    value, error, evaluations = adaptive_quadrature(f, points, tol)
    tail = amplitude * math.atan(epsilon / T) / epsilon
    if full_line:
        value = 0.5 * (value + 2.0 * tail)
        error *= 0.5
    else:
        value += tail
    return QuadratureResult(
        value=value, abs_error_estimate=error, evaluations=evaluations, tail_cut=T
    )


def norm_regularized_k0(
    rho: float, epsilon: float, full_line: bool = False
) -> RegularizedK0:
    """
    The K = 0 integral regularized by epsilon: analytic pi^2 / (4 epsilon sinh rho)
    and the numeric Lorentzian quadrature it comes from.

    Raises:
        ConvergenceError: When numeric and analytic differ by more than 1e-6 relative
    """
    _check_rho(rho)
    if not epsilon > 0.0:
        raise DomainError(f"epsilon must be positive: {epsilon}")
    analytic = regularized_k0_analytic(rho, epsilon)
    numeric = lorentzian_quadrature(rho, epsilon, 1e-10 * analytic, full_line)
    result = RegularizedK0(analytic=analytic, numeric=numeric)
    if result.relative_error > 1e-6:
        raise ConvergenceError(
            f"Regularized quadrature off - epsilon:{epsilon} relative_error:{result.relative_error}"
        )
    return result


def collapse_demo(rho: float, eps_sequence: Iterable[float]) -> list[CollapseRow]:
    """
    Residue series at K = -epsilon split into the n = 0 pole and the n >= 1
    poles, against pi^2 / (4 epsilon sinh rho). The n >= 1 share vanishes as
    epsilon -> 0 because P^n_0 = 0 for n >= 1.
    """
    _check_rho(rho)
    prefactor = math.pi**2 / (2.0 * math.sinh(rho))
    rows = []
    for epsilon in eps_sequence:
        if not 0.0 < epsilon < 0.5:
            raise DomainError(f"epsilon must lie in (0, 1/2): {epsilon}")
        K = -epsilon
        total = norm_residue_series(K, rho).value
        n0_term = prefactor * residue_series_term(K, 0, rho).real
        row = CollapseRow(
            epsilon=epsilon,
            n0_term=n0_term,
            tail_sum=total - n0_term,
            ratio=total / regularized_k0_analytic(rho, epsilon),
        )
        LOG.info(
            "Collapse - epsilon:%s n0:%s tail:%s ratio:%s",
            epsilon,
            row.n0_term,
            row.tail_sum,
            row.ratio,
        )
        rows.append(row)
    return rows
