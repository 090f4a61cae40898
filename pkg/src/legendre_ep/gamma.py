"""
Complex gamma-function kernel.

Provides gamma, log-gamma and the entire reciprocal gamma for complex
arguments, plus exact pole metadata. Every Legendre prefactor is built on
these functions. The right half-plane uses a Lanczos rational approximation
(g = 7, nine coefficients); Re z < 1/2 goes through the reflection formula.
Large-|z| log-gamma uses the Stirling series in numpy extended precision.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np

from legendre_ep.errors import PoleError

LOG = logging.getLogger(__name__)

POLE_TOLERANCE = 1e-12
LOG_POLE_TOLERANCE = 1e-300

_LANCZOS_G = 7.0
_LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)
# |Im z| beyond which sin(pi z) is evaluated through its dominant exponential
_LOG_SIN_SWITCH = 20.0

STIRLING_SWITCH = 20.0
_PI_EXTENDED = 4 * np.arctan(np.longdouble(1))
_LOG_PI_EXTENDED = np.log(_PI_EXTENDED)
_HALF_LOG_TWO_PI_EXTENDED = np.log(2 * _PI_EXTENDED) / 2
# B_2k / (2k (2k - 1)), k = 1..8; the next term is below 1e-21 at |z| = 20
_STIRLING_COEFFICIENTS = tuple(
    np.longdouble(n) / np.longdouble(d)
    for n, d in (
        (1, 12),
        (-1, 360),
        (1, 1260),
        (-1, 1680),
        (1, 1188),
        (-691, 360360),
        (1, 156),
        (-3617, 122400),
    )
)


@dataclass(frozen=True)
class GammaPoleInfo:
    """
    Location and residue of the gamma pole at z = -n.

    Attributes:
        index: Nonnegative pole index n
        location: The pole location -n
        residue: (-1)^n / n!
    """

    index: int
    location: complex
    residue: complex


def nonpositive_integer(z: complex, tolerance: float = POLE_TOLERANCE) -> int | None:
    """
    Return n when z lies within tolerance of -n (n >= 0), otherwise None.
    """
    z = complex(z)
    if abs(z.imag) > tolerance or z.real > tolerance:
        return None
    nearest = round(z.real)
    if abs(z.real - nearest) > tolerance:
        return None
    return -int(nearest)


def sinpi(z: complex) -> complex:
    """
    sin(pi z) with the real part reduced first, so integers give exact zeros.
    """
    z = complex(z)
    shift = round(z.real)
    reduced = complex(z.real - shift, z.imag)
    value = cmath.sin(math.pi * reduced)
    return -value if shift % 2 else value


def log_sinpi(z: complex) -> complex:
    """
    log(sin(pi z)) that stays finite for large |Im z|.
    """
    z = complex(z)
    if abs(z.imag) < _LOG_SIN_SWITCH:
        return cmath.log(sinpi(z))
    # sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i, keep the growing exponential
    if z.imag > 0:
        return -1j * math.pi * z + cmath.log(-(1.0 - cmath.exp(2j * math.pi * z)) / 2j)
    return 1j * math.pi * z + cmath.log((1.0 - cmath.exp(-2j * math.pi * z)) / 2j)


def log_gamma(z: complex) -> complex:
    """
    Logarithm of the gamma function.

    For Re z >= 1/2 the value is the analytic log-gamma (real on the positive
    axis); for Re z < 1/2 it comes from the reflection formula and its
    imaginary part is determined modulo 2*pi. exp(log_gamma(z)) == gamma(z).
    From |z| = 20 on the Stirling series is summed in extended precision and
    rounded once, since exp() turns every absolute error in the logarithm
    into a relative error of the same size.

    Raises:
        PoleError: When z is within 1e-300 of a nonpositive integer
    """
    z = complex(z)
    if nonpositive_integer(z, LOG_POLE_TOLERANCE) is not None:
        raise PoleError(z, "gamma poles at z = 0, -1, -2, ...")
    if abs(z) >= STIRLING_SWITCH:
        return _log_gamma_extended(z)
    if z.real < 0.5:
        return _LOG_PI - log_sinpi(z) - _log_gamma_lanczos(1.0 - z)
    return _log_gamma_lanczos(z)


def _log_gamma_extended(z: complex) -> complex:
    if z.real >= 0.5:
        return complex(_stirling(np.clongdouble(z)))
    reflected = _LOG_PI_EXTENDED - _log_sinpi_extended(z) - _stirling(1 - np.clongdouble(z))
    return complex(reflected)


def _stirling(w: np.clongdouble) -> np.clongdouble:
    inverse = 1 / w
    inverse_squared = inverse * inverse
    correction = np.clongdouble(0)
    power = inverse
    for coefficient in _STIRLING_COEFFICIENTS:
        correction += coefficient * power
        power *= inverse_squared
    return (w - 0.5) * np.log(w) - w + _HALF_LOG_TWO_PI_EXTENDED + correction


def _log_sinpi_extended(z: complex) -> np.clongdouble:
    shift = round(z.real)
    w = np.clongdouble(complex(z.real - shift, z.imag))
    i_pi = np.clongdouble(1j) * _PI_EXTENDED
    if abs(z.imag) < _LOG_SIN_SWITCH:
        value = np.log(np.sin(_PI_EXTENDED * w))
    elif z.imag > 0:
        value = -i_pi * w + np.log((np.exp(2 * i_pi * w) - 1) / np.clongdouble(2j))
    else:
        value = i_pi * w + np.log((1 - np.exp(-2 * i_pi * w)) / np.clongdouble(2j))
    if shift % 2:
        # log(-1), on the side that keeps the result conjugate-symmetric
        value += i_pi if z.imag >= 0 else -i_pi
    return value


def _log_gamma_lanczos(z: complex) -> complex:
    z = z - 1.0
    series = _LANCZOS_COEFFICIENTS[0]
    for i, coefficient in enumerate(_LANCZOS_COEFFICIENTS[1:], start=1):
        series += coefficient / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * cmath.log(t) - t + cmath.log(series)


def gamma(z: complex) -> complex:
    """
    Gamma function for complex z.

    Raises:
        PoleError: When z is within 1e-12 of a nonpositive integer
    """
    z = complex(z)
    if nonpositive_integer(z) is not None:
        raise PoleError(z, "gamma poles at z = 0, -1, -2, ...")
    if z.real < 0.5:
        return math.pi / (sinpi(z) * cmath.exp(_log_gamma_lanczos(1.0 - z)))
    return cmath.exp(_log_gamma_lanczos(z))


def recip_gamma(z: complex) -> complex:
    """
    Reciprocal gamma function 1/gamma(z), an entire function.

    Returns exactly zero at the nonpositive integers (tolerance 1e-12). Near
    those points the reflected form sin(pi z) * gamma(1 - z) / pi is used, so
    the zeros come out clean instead of as 1/huge.
    """
    z = complex(z)
    if nonpositive_integer(z) is not None:
        return 0j
    if z.real < 0.5:
        return sinpi(z) * cmath.exp(_log_gamma_lanczos(1.0 - z)) / math.pi
    return cmath.exp(-_log_gamma_lanczos(z))


def gamma_pole(n: int) -> GammaPoleInfo:
    """
    Pole metadata for gamma at z = -n.

    Example:
        >>> gamma_pole(5).residue
        (-0.008333333333333333+0j)
    """
    if n < 0:
        raise ValueError(f"Pole index must be nonnegative: {n}")
    residue = (-1) ** n / math.factorial(n)
    return GammaPoleInfo(index=n, location=complex(-n, 0.0), residue=complex(residue))
