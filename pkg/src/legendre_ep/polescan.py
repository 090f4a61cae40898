"""
Poles and zeros of Q^{-1/2-K}_nu(cosh rho) in the complex degree plane.

Q has candidate poles at nu = K - 1/2 - n (n = 0, 1, 2, ...) from the gamma
factor of the Whipple form. The residue there is proportional to
P^{n-K}_K(coth rho), which vanishes for integer K whenever n - K > K. So:
- K a negative integer: every candidate cancels, Q is entire in nu
- K a nonnegative integer: 2K + 1 poles survive, at nu = K - 1/2 ... -K - 1/2
- any other K: an infinite ladder of poles

For large cosh rho only the leading gamma ratio gamma(nu + 1/2 - K)/gamma(nu + 3/2)
is visible, which leaves K + 1 poles; the remaining K poles have residues
suppressed by powers of 1/cosh^2 rho. Both counts are reported.
"""

from __future__ import annotations

import cmath
import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

import numpy as np
from scipy import optimize

from legendre_ep.errors import ConvergenceError, DomainError, LegendreError
from legendre_ep.legendre import (
    EvalPoint,
    q_general,
    q_via_whipple,
    whipple_p_coth,
    whipple_prefactor,
)

LOG = logging.getLogger(__name__)

INTEGER_TOLERANCE = 1e-9
RESIDUE_FLOOR = 1e-12
CONTOUR_RADIUS = 1e-2
CONTOUR_SAMPLES = 256
CONTOUR_AGREEMENT = 1e-6
DEFAULT_RHO = math.acosh(2.0)
ZERO_TOLERANCE = 1e-13
ZERO_ITERATIONS = 200


class PoleSource(str, Enum):
    PREDICTED = "predicted"
    NUMERIC = "numeric"


class EPKind(str, Enum):
    """Exceptional-point pattern of the degree-plane poles."""

    NONE = "none"
    FINITE = "finite"
    INFINITE = "infinite"


@dataclass(frozen=True)
class Window:
    """
    Rectangle in the nu plane: re_min < Re nu < re_max, im_min <= Im nu <= im_max.

    The real edges are open so a pole sitting exactly on an edge is outside.
    """

    re_min: float = -6.0
    re_max: float = 1.0
    im_min: float = -1.0
    im_max: float = 1.0

    def __post_init__(self):
        bounds = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(math.isfinite(b) for b in bounds):
            raise DomainError(f"Window must be bounded: {bounds}")
        if self.re_min >= self.re_max or self.im_min > self.im_max:
            raise DomainError(f"Window bounds out of order: {bounds}")

    def contains(self, nu: complex) -> bool:
        nu = complex(nu)
        return (
            self.re_min < nu.real < self.re_max
            and self.im_min <= nu.imag <= self.im_max
        )


DEFAULT_WINDOW = Window()


@dataclass(frozen=True)
class PoleRecord:
    """
    A degree-plane pole of Q and its residue.

    Attributes:
        nu_location: Pole location, nu = K - 1/2 - n
        residue: Residue of Q at the pole (depends on rho)
        source: Whether the residue was derived analytically or by contour integration
        K: Order shift
        rho_used: Radial coordinate the residue was computed at
    """

    nu_location: complex
    residue: complex
    source: PoleSource
    K: float
    rho_used: float


@dataclass(frozen=True)
class PoleConfirmation:
    predicted: PoleRecord
    numeric: PoleRecord

    @property
    def relative_error(self) -> float:
        reference = abs(self.predicted.residue)
        difference = abs(self.numeric.residue - self.predicted.residue)
        return difference / reference if reference > 0 else difference


@dataclass(frozen=True)
class EPClassification:
    """
    Classification of the pole pattern for a given K.

    Attributes:
        K: Order shift
        kind: none, finite or infinite
        pole_count: Exact number of poles (None when infinite)
        leading_order_count: Poles visible in the large-cosh form (None when infinite)
        pole_count_in_window: Surviving poles inside window
        window: The window that was counted
        exact_integer: Whether K was treated as an integer
    """

    K: float
    kind: EPKind
    pole_count: int | None
    leading_order_count: int | None
    pole_count_in_window: int
    window: Window
    exact_integer: bool


@dataclass(frozen=True)
class ResidueEstimate:
    value: complex
    refined: complex

    @property
    def relative_change(self) -> float:
        scale = max(abs(self.refined), RESIDUE_FLOOR)
        return abs(self.refined - self.value) / scale


@dataclass
class ScanGrid:
    """
    log10|Q| sampled on a rectangular nu grid.

    values[j, i] belongs to nu = re_values[i] + i * im_values[j]; failed or
    non-finite cells hold NaN.
    """

    K: float
    rho: float
    window: Window
    re_values: np.ndarray
    im_values: np.ndarray
    values: np.ndarray
    failures: list[tuple[int, int, str]] = field(default_factory=list)

    @property
    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self.values)

    def peak(self) -> tuple[complex, float]:
        """Grid location and value of the largest finite log-magnitude."""
        masked = np.where(self.finite_mask, self.values, -np.inf)
        j, i = np.unravel_index(int(np.argmax(masked)), masked.shape)
        return complex(self.re_values[i], self.im_values[j]), float(masked[j, i])


@dataclass(frozen=True)
class CollapseTrendRow:
    j: int
    K: float
    residues: tuple[complex, ...]


def integer_k(K: float, exact_integer: bool | None = None) -> int | None:
    """
    Integer value of K, or None when K is treated as noninteger.

    exact_integer=True forces integer treatment (K is rounded), False forces
    noninteger treatment, None detects within 1e-9.
    """
    if exact_integer is False:
        return None
    nearest = round(K)
    if exact_integer:
        return int(nearest)
    return int(nearest) if abs(K - nearest) <= INTEGER_TOLERANCE else None


def is_cancelled(K: float, n: int, exact_integer: bool | None = None) -> bool:
    """Whether the candidate pole nu = K - 1/2 - n is cancelled by a zero of P."""
    k = integer_k(K, exact_integer)
    if k is None:
        return False
    return n - k > k


def _candidate_indices(K: float, window: Window) -> Iterable[int]:
    if not window.im_min <= 0.0 <= window.im_max:
        return
    n = max(0, math.floor(K - 0.5 - window.re_max))
    while K - 0.5 - n > window.re_min:
        if window.contains(K - 0.5 - n):
            yield n
        n += 1


def analytic_residue(K: float, n: int, rho: float = DEFAULT_RHO) -> complex:
    """
    Residue of Q^{-1/2-K}_nu(cosh rho) at nu = K - 1/2 - n.

    gamma(nu + 1/2 - K) contributes (-1)^n / n!, the rest is the Whipple
    prefactor times P^{n-K}_K(coth rho).
    """
    if n < 0:
        raise DomainError(f"Pole index must be nonnegative: {n}")
    nu = K - 0.5 - n
    sign = -1.0 if n % 2 else 1.0
    return (
        whipple_prefactor(K, rho)
        * (sign / math.factorial(n))
        * whipple_p_coth(K, nu, rho)
    )


def predict_poles(
    K: float,
    window: Window = DEFAULT_WINDOW,
    rho: float = DEFAULT_RHO,
    exact_integer: bool | None = None,
) -> list[PoleRecord]:
    """
    Surviving poles nu = K - 1/2 - n inside window, with analytic residues.
    """
    records = []
    for n in _candidate_indices(K, window):
        if is_cancelled(K, n, exact_integer):
            continue
        records.append(
            PoleRecord(
                nu_location=complex(K - 0.5 - n),
                residue=analytic_residue(K, n, rho),
                source=PoleSource.PREDICTED,
                K=K,
                rho_used=rho,
            )
        )
    LOG.debug("Predicted poles - K:%s count:%s", K, len(records))
    return records


def cancelled_locations(
    K: float, window: Window = DEFAULT_WINDOW, exact_integer: bool | None = None
) -> list[complex]:
    """Candidate pole locations inside window that a zero of P removes."""
    return [
        complex(K - 0.5 - n)
        for n in _candidate_indices(K, window)
        if is_cancelled(K, n, exact_integer)
    ]


def classify_exceptional(
    K: float, window: Window = DEFAULT_WINDOW, exact_integer: bool | None = None
) -> EPClassification:
    k = integer_k(K, exact_integer)
    in_window = sum(
        1 for n in _candidate_indices(K, window) if not is_cancelled(K, n, exact_integer)
    )
    if k is None:
        kind, exact, leading = EPKind.INFINITE, None, None
    elif k < 0:
        kind, exact, leading = EPKind.NONE, 0, 0
    else:
        kind, exact, leading = EPKind.FINITE, 2 * k + 1, k + 1
    return EPClassification(
        K=K,
        kind=kind,
        pole_count=exact,
        leading_order_count=leading,
        pole_count_in_window=in_window,
        window=window,
        exact_integer=k is not None,
    )


def _conical_q(K: float, nu: complex, rho: float) -> complex:
    return q_via_whipple(K, nu, rho)


def _trapezoid_residue(
    K: float, nu0: complex, rho: float, radius: float, samples: int
) -> complex:
    total = 0j
    for j in range(samples):
        phase = cmath.exp(2j * math.pi * j / samples)
        total += _conical_q(K, nu0 + radius * phase, rho) * phase
    return radius * total / samples


def numeric_residue_estimate(
    K: float,
    nu0: complex,
    rho: float = DEFAULT_RHO,
    radius: float = CONTOUR_RADIUS,
    samples: int = CONTOUR_SAMPLES,
) -> ResidueEstimate:
    """Trapezoidal contour residue at samples and at 2 * samples."""
    if samples < 64:
        raise DomainError(f"Contour needs at least 64 samples: {samples}")
    if not 0.0 < radius < 0.5:
        raise DomainError(f"Contour radius must lie in (0, 0.5): {radius}")
    return ResidueEstimate(
        value=_trapezoid_residue(K, complex(nu0), rho, radius, samples),
        refined=_trapezoid_residue(K, complex(nu0), rho, radius, 2 * samples),
    )


def numeric_residue(
    K: float,
    nu0: complex,
    rho: float = DEFAULT_RHO,
    radius: float = CONTOUR_RADIUS,
    samples: int = CONTOUR_SAMPLES,
) -> complex:
    """
    (1/2 pi i) times the contour integral of Q around |nu - nu0| = radius.

    A warning is logged when the estimate at 2 * samples differs by more
    than 1e-6 relative.
    """
    estimate = numeric_residue_estimate(K, nu0, rho, radius, samples)
    if abs(estimate.refined) > RESIDUE_FLOOR and estimate.relative_change > CONTOUR_AGREEMENT:
        LOG.warning(
            "Contour residue unstable - K:%s nu0:%s change:%s",
            K,
            nu0,
            estimate.relative_change,
        )
    return estimate.value


def confirm_poles(
    K: float,
    window: Window = DEFAULT_WINDOW,
    rho: float = DEFAULT_RHO,
    radius: float = CONTOUR_RADIUS,
    samples: int = CONTOUR_SAMPLES,
    exact_integer: bool | None = None,
) -> list[PoleConfirmation]:
    """Pair every predicted pole with its contour-integrated residue."""
    confirmations = []
    for predicted in predict_poles(K, window, rho, exact_integer):
        value = numeric_residue(K, predicted.nu_location, rho, radius, samples)
        numeric = PoleRecord(
            nu_location=predicted.nu_location,
            residue=value,
            source=PoleSource.NUMERIC,
            K=K,
            rho_used=rho,
        )
        confirmation = PoleConfirmation(predicted=predicted, numeric=numeric)
        if abs(value) <= RESIDUE_FLOOR:
            LOG.warning("Predicted pole not confirmed - K:%s nu:%s", K, predicted.nu_location)
        LOG.debug(
            "Pole confirmed - K:%s nu:%s relative_error:%s",
            K,
            predicted.nu_location,
            confirmation.relative_error,
        )
        confirmations.append(confirmation)
    return confirmations


def _scan_row(K: float, rho: float, re_values: np.ndarray, im: float):
    row = np.full(len(re_values), np.nan)
    failures = []
    for i, re in enumerate(re_values):
        try:
            magnitude = abs(_conical_q(K, complex(re, im), rho))
        except (LegendreError, OverflowError, ZeroDivisionError) as exc:
            failures.append((i, f"{type(exc).__name__}: {exc}"))
            continue
        if magnitude > 0.0 and math.isfinite(magnitude):
            row[i] = math.log10(magnitude)
    return row, failures


def scan_grid(
    K: float,
    window: Window = DEFAULT_WINDOW,
    nx: int = 141,
    ny: int = 40,
    rho: float = DEFAULT_RHO,
    jobs: int = 1,
) -> ScanGrid:
    """
    log10|Q^{-1/2-K}_nu(cosh rho)| over window, row per imaginary part.

    Rows are independent and may run in worker processes; the result is
    assembled by row index so it does not depend on completion order.
    """
    if nx < 2 or ny < 2:
        raise DomainError(f"Grid needs nx, ny >= 2: nx:{nx} ny:{ny}")
    re_values = np.linspace(window.re_min, window.re_max, nx)
    im_values = np.linspace(window.im_min, window.im_max, ny)
    values = np.full((ny, nx), np.nan)
    failures: list[tuple[int, int, str]] = []

    def _store(j: int, row: np.ndarray, row_failures):
        values[j, :] = row
        failures.extend((j, i, message) for i, message in row_failures)

    LOG.info("Scanning grid - K:%s nx:%s ny:%s jobs:%s", K, nx, ny, jobs)
    if jobs <= 1:
        for j, im in enumerate(im_values):
            _store(j, *_scan_row(K, rho, re_values, float(im)))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = {
                executor.submit(_scan_row, K, rho, re_values, float(im)): j
                for j, im in enumerate(im_values)
            }
            for future in as_completed(futures):
                _store(futures[future], *future.result())
    failures.sort()
    if failures:
        LOG.debug("Grid cells failed - K:%s count:%s", K, len(failures))
    return ScanGrid(
        K=K,
        rho=rho,
        window=window,
        re_values=re_values,
        im_values=im_values,
        values=values,
        failures=failures,
    )


def _real_q(K: float, nu: float, rho: float) -> float:
    mu = -0.5 - K
    value = q_general(EvalPoint(mu=mu, nu=nu, rho=rho))
    return (value * cmath.exp(-1j * math.pi * mu)).real


def locate_zero(K: float, m: int, rho: float, half_width: float = 0.25) -> float:
    """
    Real zero of Q^{-1/2-K}_nu(cosh rho) near nu = -3/2 - m, by Brent's method
    on the real function e^{-i mu pi} Q.

    The bracket is narrowed so it stays clear of the poles nu = K - 1/2 - n.

    Raises:
        ConvergenceError: When the bracket shows no sign change or Brent's
            method runs out of iterations
    """
    if m < 0:
        raise DomainError(f"Zero index must be nonnegative: {m}")
    target = -1.5 - m
    offset = (target - (K - 0.5)) % 1.0
    pole_distance = min(offset, 1.0 - offset)
    width = min(half_width, 0.5 * pole_distance)
    if width <= 0.0:
        raise ConvergenceError(f"Zero at {target} coincides with a pole (K = {K})")
    lo, hi = target - width, target + width
    f_lo, f_hi = _real_q(K, lo, rho), _real_q(K, hi, rho)
    if f_lo * f_hi > 0.0:
        raise ConvergenceError(
            f"No sign change near {target} - K:{K} f_lo:{f_lo} f_hi:{f_hi}"
        )
    try:
        root, info = optimize.brentq(
            lambda nu: _real_q(K, nu, rho),
            lo,
            hi,
            xtol=ZERO_TOLERANCE,
            maxiter=ZERO_ITERATIONS,
            full_output=True,
        )
    except RuntimeError as exc:
        raise ConvergenceError(f"Zero search near {target} failed - K:{K} {exc}") from exc
    LOG.debug("Zero located - K:%s m:%s nu:%s iterations:%s", K, m, root, info.iterations)
    return float(root)


def collapse_trend(
    n_max: int = 4, j_range: Iterable[int] = range(2, 7), rho: float = DEFAULT_RHO
) -> list[CollapseTrendRow]:
    """
    Residues at nu = K - 1/2 - n, n = 0..n_max, along K = -10^-j.

    As j grows the n >= 1 residues shrink towards zero and the n = 0 residue
    approaches its K = 0 value.
    """
    rows = []
    for j in j_range:
        K = -(10.0**-j)
        residues = tuple(analytic_residue(K, n, rho) for n in range(n_max + 1))
        rows.append(CollapseTrendRow(j=j, K=K, residues=residues))
        LOG.debug("Collapse trend - j:%s n0:%s n1:%s", j, residues[0], residues[-1])
    return rows


def collapse_trend_is_monotone(rows: list[CollapseTrendRow]) -> bool:
    """Whether every n >= 1 residue magnitude decreases strictly along the rows."""
    for n in range(1, len(rows[0].residues)):
        magnitudes = [abs(row.residues[n]) for row in rows]
        if any(b >= a for a, b in zip(magnitudes, magnitudes[1:])):
            return False
    return True
