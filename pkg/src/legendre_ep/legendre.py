"""
Associated Legendre functions P^mu_nu and Q^mu_nu on arguments greater than 1.

The general evaluators use the hypergeometric representations:
- P^mu_nu(cosh rho) = ((cosh rho + 1)/(cosh rho - 1))^(mu/2)
  * F(-nu, nu + 1; 1 - mu; (1 - cosh rho)/2) / gamma(1 - mu)
- Q^mu_nu(cosh rho) = e^(i mu pi) sqrt(pi) gamma(nu + mu + 1) 2^(-nu-1)
  (sinh rho)^mu (cosh rho)^(-nu-mu-1)
  * F(nu/2 + mu/2 + 1, nu/2 + mu/2 + 1/2; nu + 3/2; 1/cosh^2 rho) / gamma(nu + 3/2)

Phase convention: Q carries the e^(i mu pi) prefactor. Every identity in this
package (Whipple, the product form of |Q|^2, the order-reflection relation)
assumes it; references that drop the factor differ by that phase.

The order parameter is usually mu = -1/2 - K and the degree usually sits on the
conical line nu = -1/2 + i tau.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

from legendre_ep.errors import DomainError, PoleError
from legendre_ep.gamma import gamma, nonpositive_integer, recip_gamma, sinpi
from legendre_ep.hyp2f1 import HypParams, hyp2f1_regularized, series_regularized

LOG = logging.getLogger(__name__)

LOG_TWO = math.log(2.0)
SQRT_PI = math.sqrt(math.pi)
# the coth-argument series is summed directly while coth rho < 3
CONICAL_SERIES_LIMIT = 3.0
LAURENT_RADIUS = 1e-2
LAURENT_SAMPLES = 64
RESIDUE_AWARE_DISTANCE = 1e-3
_CLOSED_FORM_SERIES_SWITCH = 1e-6


@dataclass(frozen=True)
class EvalPoint:
    """
    Evaluation point (order, degree, radial coordinate).

    The argument of the function is cosh(rho); hyperbolic quantities are
    computed once and cached.

    Attributes:
        mu: Complex order
        nu: Complex degree
        rho: Radial coordinate, strictly positive
    """

    mu: complex
    nu: complex
    rho: float

    def __post_init__(self):
        object.__setattr__(self, "mu", complex(self.mu))
        object.__setattr__(self, "nu", complex(self.nu))
        if not self.rho > 0.0 or math.isinf(self.rho):
            raise DomainError(f"rho must be positive and finite: {self.rho}")

    @classmethod
    def at_argument(cls, mu: complex, nu: complex, z: float) -> "EvalPoint":
        """Build a point whose argument cosh(rho) equals z > 1."""
        if not z > 1.0:
            raise DomainError(f"Argument must be > 1: {z}")
        return cls(mu=mu, nu=nu, rho=math.acosh(z))

    @classmethod
    def at_coth(cls, mu: complex, nu: complex, rho: float) -> "EvalPoint":
        """Build a point with argument coth(rho), through cosh(alpha) = coth(rho)."""
        if not rho > 0.0:
            raise DomainError(f"rho must be positive: {rho}")
        return cls(mu=mu, nu=nu, rho=math.asinh(1.0 / math.sinh(rho)))

    @cached_property
    def cosh(self) -> float:
        return math.cosh(self.rho)

    @cached_property
    def sinh(self) -> float:
        return math.sinh(self.rho)

    @cached_property
    def half_sinh_squared(self) -> float:
        """sinh^2(rho/2) = (cosh rho - 1)/2 without cancellation."""
        return math.sinh(0.5 * self.rho) ** 2


@dataclass(frozen=True)
class KTauPoint:
    """
    Conical point: mu = -1/2 - K, nu = -1/2 + i tau.

    Attributes:
        K: Real order shift
        tau: Real conical parameter, tau >= 0
        rho: Radial coordinate
    """

    K: float
    tau: float
    rho: float

    def __post_init__(self):
        if self.tau < 0.0:
            raise DomainError(f"tau must be nonnegative: {self.tau}")

    @property
    def nu(self) -> complex:
        return complex(-0.5, self.tau)

    def eval_point(self) -> EvalPoint:
        return EvalPoint(mu=-0.5 - self.K, nu=self.nu, rho=self.rho)


@dataclass(frozen=True)
class LaurentPair:
    """
    Laurent data of Q near a degree-plane pole.

    Attributes:
        pole: Pole location in the nu plane
        residue: Coefficient of 1/(nu - pole)
        regular: Q(nu) - residue/(nu - pole) at the requested nu
    """

    pole: complex
    residue: complex
    regular: complex


def p_general(pt: EvalPoint) -> complex:
    """
    P^mu_nu(cosh rho) from the hypergeometric representation.

    The 1/gamma(1 - mu) is absorbed into the regularized hypergeometric
    function, so integer mu >= 1 needs no special casing.
    """
    log_coth_half = -math.log(math.tanh(0.5 * pt.rho))
    return _p_hypergeometric(pt.mu, pt.nu, log_coth_half, -pt.half_sinh_squared)


def _p_hypergeometric(mu: complex, nu: complex, log_coth_half: float, x: float) -> complex:
    prefactor = cmath.exp(mu * log_coth_half)
    return prefactor * hyp2f1_regularized(HypParams(a=-nu, b=nu + 1.0, c=1.0 - mu, x=x))


def q_general(pt: EvalPoint, residue_aware: bool = False) -> complex | LaurentPair:
    """
    Q^mu_nu(cosh rho) from the hypergeometric representation.

    Poles sit where nu + mu + 1 is a nonpositive integer. With residue_aware
    set, points within 1e-3 of such a pole return a LaurentPair (residue and
    regular part) instead of a huge finite number.

    Raises:
        PoleError: When nu + mu + 1 is within 1e-12 of a nonpositive integer
            and residue_aware is off
    """
    if residue_aware:
        pole = _nearest_q_pole(pt.mu, pt.nu)
        if pole is not None and abs(pt.nu - pole) < RESIDUE_AWARE_DISTANCE:
            return q_laurent(pt, pole)
    return _q_value(pt.mu, pt.nu, pt.rho)


def _q_value(mu: complex, nu: complex, rho: float) -> complex:
    shifted = nu + mu + 1.0
    if nonpositive_integer(shifted) is not None:
        pole = _nearest_q_pole(mu, nu)
        # a zero of the regularized 2F1 at the same point removes the pole
        if hyp2f1_regularized(_q_params(mu, pole, rho)) == 0:
            LOG.debug("Removable Q singularity - mu:%s nu:%s", mu, nu)
            return q_laurent(EvalPoint(mu=mu, nu=nu, rho=rho), pole).regular
        raise PoleError(nu, f"nu + mu + 1 = 0, -1, -2, ... (mu = {mu:g})")
    log_scale = (
        1j * math.pi * mu
        - (nu + 1.0) * LOG_TWO
        + mu * math.log(math.sinh(rho))
        - shifted * math.log(math.cosh(rho))
    )
    return (
        SQRT_PI
        * cmath.exp(log_scale)
        * gamma(shifted)
        * hyp2f1_regularized(_q_params(mu, nu, rho))
    )


def _q_params(mu: complex, nu: complex, rho: float) -> HypParams:
    cosh = math.cosh(rho)
    return HypParams(
        a=0.5 * nu + 0.5 * mu + 1.0,
        b=0.5 * nu + 0.5 * mu + 0.5,
        c=nu + 1.5,
        x=1.0 / (cosh * cosh),
    )


def _nearest_q_pole(mu: complex, nu: complex) -> complex | None:
    shifted = nu + mu + 1.0
    n = round(-shifted.real)
    if n < 0:
        return None
    return complex(-n) - mu - 1.0


def q_laurent(
    pt: EvalPoint,
    pole: complex,
    radius: float = LAURENT_RADIUS,
    samples: int = LAURENT_SAMPLES,
) -> LaurentPair:
    """
    Residue of Q at pole and the regular part at pt.nu, by trapezoidal
    contour integration on the circle |nu - pole| = radius.
    """
    if abs(pt.nu - pole) >= radius:
        raise DomainError(f"Point must lie inside the contour: {pt.nu} pole:{pole}")
    values = []
    for j in range(samples):
        phase = cmath.exp(2j * math.pi * j / samples)
        values.append((phase, _q_value(pt.mu, pole + radius * phase, pt.rho)))
    residue = radius * sum(q * phase for phase, q in values) / samples
    regular = 0j
    for phase, q in values:
        zeta = pole + radius * phase
        regular += (q - residue / (radius * phase)) * (radius * phase) / (zeta - pt.nu)
    return LaurentPair(pole=pole, residue=residue, regular=regular / samples)


def p_closed_mu_minus_half(nu: complex, rho: float) -> complex:
    """
    P^{-1/2}_nu(cosh rho) in closed form; regular at nu = -1/2.
    """
    _check_rho(rho)
    s = complex(nu) + 0.5
    scale = math.sqrt(1.0 / (2.0 * math.pi * math.sinh(rho)))
    if abs(s) < _CLOSED_FORM_SERIES_SWITCH:
        sr2 = (s * rho) ** 2
        return scale * 2.0 * rho * (1.0 + sr2 / 6.0 + sr2 * sr2 / 120.0)
    return scale * 2.0 * cmath.sinh(s * rho) / s


def q_closed_mu_minus_half(nu: complex, rho: float) -> complex:
    """
    Q^{-1/2}_nu(cosh rho) = -i sqrt(pi/(2 sinh rho)) e^{-(nu+1/2) rho}/(nu + 1/2).

    Raises:
        PoleError: At nu = -1/2
    """
    _check_rho(rho)
    s = complex(nu) + 0.5
    if abs(s) < 1e-12:
        raise PoleError(nu, "nu = -1/2")
    return -1j * math.sqrt(math.pi / (2.0 * math.sinh(rho))) * cmath.exp(-s * rho) / s


def q_asymptotic(K: float, nu: complex, rho: float) -> complex:
    """
    Leading large-cosh(rho) form of Q^{-1/2-K}_nu(cosh rho).

    Poles at nu = K - 1/2 - n come from gamma(nu + 1/2 - K); zeros at
    nu = -3/2, -5/2, ... from 1/gamma(nu + 3/2), independent of K.
    """
    _check_rho(rho)
    nu = complex(nu)
    log_scale = -(nu + 1.0) * (LOG_TWO + math.log(math.cosh(rho)))
    return (
        -1j
        * SQRT_PI
        * cmath.exp(-1j * math.pi * K)
        * gamma(nu + 0.5 - K)
        * cmath.exp(log_scale)
        * recip_gamma(nu + 1.5)
    )


def p_conical_series(K: float, nu: complex, rho: float) -> complex:
    """
    P^{-nu-1/2}_K(coth rho) as e^{-(nu+1/2) rho} times a series whose k-th
    term carries 1/gamma(nu + 3/2 + k), so the result has no nu-plane poles.

    The series is summed directly while coth rho < 3 and goes through the
    transformed hypergeometric route otherwise.
    """
    _check_rho(rho)
    nu = complex(nu)
    x = -1.0 / math.expm1(2.0 * rho)
    params = HypParams(a=-K, b=K + 1.0, c=nu + 1.5, x=x)
    if 1.0 / math.tanh(rho) < CONICAL_SERIES_LIMIT:
        series = series_regularized(params)
    else:
        series = hyp2f1_regularized(params)
    return cmath.exp(-(nu + 0.5) * rho) * series


def whipple_p_coth(K: float, nu: complex, rho: float) -> complex:
    """
    The inner function P^{-nu-1/2}_K(coth rho) of the Whipple relation.

    Uses the coth series while coth rho < 3, and the general evaluator at
    cosh(alpha) = coth(rho) otherwise.
    """
    _check_rho(rho)
    if 1.0 / math.tanh(rho) < CONICAL_SERIES_LIMIT:
        return p_conical_series(K, nu, rho)
    return p_general(EvalPoint.at_coth(mu=-complex(nu) - 0.5, nu=K, rho=rho))


def whipple_prefactor(K: float, rho: float) -> complex:
    """-i e^{-i K pi} sqrt(pi / (2 sinh rho))."""
    return -1j * cmath.exp(-1j * math.pi * K) * math.sqrt(math.pi / (2.0 * math.sinh(rho)))


def q_via_whipple(K: float, nu: complex, rho: float) -> complex:
    """
    Q^{-1/2-K}_nu(cosh rho) through the Whipple relation
    -i e^{-iK pi} sqrt(pi/(2 sinh rho)) gamma(nu + 1/2 - K) P^{-nu-1/2}_K(coth rho).

    Raises:
        PoleError: When nu + 1/2 - K is a nonpositive integer
    """
    _check_rho(rho)
    shifted = complex(nu) + 0.5 - K
    if nonpositive_integer(shifted) is not None:
        raise PoleError(nu, f"nu = K - 1/2 - n (K = {K:g})")
    return whipple_prefactor(K, rho) * gamma(shifted) * whipple_p_coth(K, nu, rho)


def conical_q(pt: KTauPoint) -> complex:
    """Q^{-1/2-K}_{-1/2+i tau}(cosh rho) on the conical line."""
    return q_via_whipple(pt.K, pt.nu, pt.rho)


def q_tau_zero(K: float, rho: float) -> complex:
    """
    Q^{-1/2-K}_{-1/2}(cosh rho) = -i e^{-iK pi} sqrt(pi/(2 sinh rho))
    gamma(-K) P^0_K(coth rho), singular at K = 0, 1, 2, ...

    Raises:
        PoleError: When K is a nonnegative integer
    """
    if nonpositive_integer(-K) is not None:
        raise PoleError(complex(K), "K = 0, 1, 2, ... at tau = 0")
    return whipple_prefactor(K, rho) * gamma(-K) * whipple_p_coth(K, -0.5, rho)


def p_order_reflection(mu: complex, nu: complex, z: float) -> complex:
    """
    P^{-mu}_nu(z) from P^mu_nu and Q^mu_nu:
    gamma(nu - mu + 1)/gamma(nu + mu + 1)
    * [P^mu_nu(z) - (2/pi) e^{-i mu pi} sin(mu pi) Q^mu_nu(z)].

    The Q term is skipped when sin(mu pi) is exactly zero. When the gamma
    ratio is 0 * inf, the value is the analytic limit, evaluated directly.
    """
    mu = complex(mu)
    nu = complex(nu)
    pt = EvalPoint.at_argument(mu, nu, z)
    numerator = nu - mu + 1.0
    denominator = nu + mu + 1.0
    if nonpositive_integer(numerator) is not None:
        LOG.debug("Order reflection degenerate, direct - mu:%s nu:%s", mu, nu)
        return p_general(EvalPoint.at_argument(-mu, nu, z))
    value = p_general(pt)
    sin_term = sinpi(mu)
    if sin_term != 0:
        value -= 2.0 / math.pi * cmath.exp(-1j * math.pi * mu) * sin_term * _q_value(
            mu, nu, pt.rho
        )
    return gamma(numerator) * recip_gamma(denominator) * value


def p_negative_order(n: int, nu: complex, z: float) -> complex:
    """
    P^{-n}_nu(z) for a nonnegative integer n; sin(n pi) = 0 removes the Q term.
    """
    if n < 0:
        raise DomainError(f"Order must be a nonnegative integer: {n}")
    return p_order_reflection(complex(n), nu, z)


def q_integer_order_degree0(n: int, z: float) -> float:
    """
    Q^n_0(z) = (z^2 - 1)^{n/2} d^n/dz^n [ln((z + 1)/(z - 1)) / 2].

    Example:
        >>> round(q_integer_order_degree0(1, 2.0), 7)
        -0.5773503
    """
    if n < 0:
        raise DomainError(f"Order must be a nonnegative integer: {n}")
    if not z > 1.0:
        raise DomainError(f"Argument must be > 1: {z}")
    if n == 0:
        return 0.5 * math.log((z + 1.0) / (z - 1.0))
    # d^n/dz^n ln(z +- 1) = (-1)^(n-1) (n-1)! / (z +- 1)^n
    derivative = 0.5 * (-1) ** (n - 1) * math.factorial(n - 1) * (
        (z + 1.0) ** -n - (z - 1.0) ** -n
    )
    return (z * z - 1.0) ** (0.5 * n) * derivative


def legendre_p_integer(K: int, z: float) -> float:
    """Ordinary Legendre polynomial P_K(z) by the three-term recurrence."""
    if K < 0:
        raise DomainError(f"Degree must be a nonnegative integer: {K}")
    previous, current = 1.0, z
    if K == 0:
        return previous
    for k in range(1, K):
        previous, current = current, ((2 * k + 1) * z * current - k * previous) / (k + 1)
    return current


def legendre_p_degree0(n: int) -> float:
    """P^n_0(z): 1 for n = 0, 0 for every positive integer order."""
    if n < 0:
        raise DomainError(f"Order must be a nonnegative integer: {n}")
    return 1.0 if n == 0 else 0.0


def ode_residual(
    fn: Callable[[float], complex],
    mu: complex,
    nu: complex,
    rho: float,
    h: float = 1e-4,
) -> float:
    """
    Relative residual of the Legendre equation in rho,
    F'' + coth(rho) F' - nu(nu + 1) F - mu^2 F / sinh^2(rho),
    by central differences, scaled by the largest individual term.
    """
    if rho < 3.0 * h:
        raise DomainError(f"rho must be >= 3h: rho:{rho} h:{h}")
    left, centre, right = fn(rho - h), fn(rho), fn(rho + h)
    second = (left - 2.0 * centre + right) / (h * h)
    first = (right - left) / (2.0 * h)
    terms = (
        second,
        first / math.tanh(rho),
        -nu * (nu + 1.0) * centre,
        -(mu * mu) * centre / math.sinh(rho) ** 2,
    )
    scale = max(abs(t) for t in terms)
    if scale == 0.0:
        return 0.0
    return abs(sum(terms)) / scale


def _check_rho(rho: float):
    if not rho > 0.0:
        raise DomainError(f"rho must be positive: {rho}")
