import cmath
import math

import mpmath
import numpy as np
import pytest

from legendre_ep import gamma
from legendre_ep.errors import PoleError


@pytest.mark.parametrize(
    "z",
    [0.5, 1.0, 2.5, 7.25, -0.5, -2.5, -3.75, 0.3 + 2j, -1.5 - 4j, 10 + 10j, 0.01j],
)
def test_gamma_matches_mpmath(z):
    expected = complex(mpmath.gamma(z))
    assert abs(gamma.gamma(z) - expected) <= 1e-12 * abs(expected)


@pytest.mark.parametrize("z", [0.5, 3.0, -2.5, -7.5 + 0.5j, 2 - 30j, -0.25 + 45j])
def test_recip_gamma_matches_mpmath(z):
    expected = complex(mpmath.rgamma(z))
    assert abs(gamma.recip_gamma(z) - expected) <= 1e-12 * max(abs(expected), 1e-300)


def test_recip_gamma_negative_half_integer():
    assert gamma.recip_gamma(-2.5).real == pytest.approx(-1.0578532, abs=1e-7)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 20])
def test_recip_gamma_exact_zero_at_poles(n):
    assert gamma.recip_gamma(-n) == 0j


@pytest.mark.parametrize("n", [0, 3])
def test_gamma_raises_at_poles(n):
    with pytest.raises(PoleError) as info:
        gamma.gamma(-n)
    assert info.value.location == complex(-n)


def test_gamma_near_pole_is_finite():
    value = gamma.gamma(-3 + 1e-6)
    assert math.isfinite(abs(value))
    assert abs(value - complex(mpmath.gamma(mpmath.mpf(-3) + mpmath.mpf("1e-6")))) < 1e-5 * abs(
        value
    )


@pytest.mark.parametrize("z", [2.5, 0.25 + 3j, -4.5 + 0.1j, 1 + 80j])
def test_log_gamma_exponentiates_to_gamma(z):
    expected = complex(mpmath.gamma(z))
    assert abs(cmath.exp(gamma.log_gamma(z)) - expected) <= 1e-11 * abs(expected)


def test_log_gamma_large_imaginary_stays_finite():
    value = gamma.log_gamma(0.5 + 400j)
    expected = complex(mpmath.loggamma(0.5 + 400j))
    assert value.real == pytest.approx(expected.real, rel=1e-12)


def test_gamma_pole_metadata():
    info = gamma.gamma_pole(5)
    assert info.location == -5
    assert info.residue == pytest.approx(-1 / 120)
    with pytest.raises(ValueError):
        gamma.gamma_pole(-1)


def test_sinpi_exact_zero_at_integers():
    assert gamma.sinpi(7) == 0
    assert gamma.sinpi(-3) == 0
    assert gamma.sinpi(0.5) == pytest.approx(1.0)


def test_nonpositive_integer():
    assert gamma.nonpositive_integer(-4 + 1e-14) == 4
    assert gamma.nonpositive_integer(0) == 0
    assert gamma.nonpositive_integer(2) is None
    assert gamma.nonpositive_integer(-4 + 1e-6j) is None


def _distance_to_poles(z: complex) -> float:
    return abs(z) if z.real > 0 else abs(z - round(z.real))


def _disk(radius: float, count: int, seed: int) -> list[complex]:
    """Uniform points of |z| <= radius, 0.1 away from the poles of gamma(z) and gamma(1 - z)."""
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < count:
        z = complex(*rng.uniform(-radius, radius, size=2))
        if abs(z) <= radius and min(_distance_to_poles(z), _distance_to_poles(1 - z)) >= 0.1:
            points.append(z)
    return points


def test_recurrence_on_disk():
    for z in _disk(50.0, 1000, seed=3):
        expected = z * gamma.gamma(z)
        assert abs(gamma.gamma(z + 1) - expected) <= 1e-12 * abs(expected), z


def test_reflection_on_disk():
    for z in _disk(50.0, 1000, seed=4):
        product = gamma.gamma(z) * gamma.gamma(1 - z) * gamma.sinpi(z)
        assert abs(product - math.pi) <= 1e-11 * math.pi, z


@pytest.mark.skipif(
    np.finfo(np.longdouble).eps >= np.finfo(float).eps,
    reason="numpy longdouble is plain double on this platform",
)
def test_log_gamma_exponentiates_on_large_disk():
    for z in _disk(100.0, 400, seed=5):
        expected = complex(mpmath.gamma(z))
        assert abs(cmath.exp(gamma.log_gamma(z)) - expected) <= 1e-13 * abs(expected), z


def test_log_gamma_is_conjugate_symmetric():
    for z in (-35.3 + 12.0j, -60.7 + 0.4j, 80.0 + 90.0j):
        mirrored = gamma.log_gamma(z.conjugate())
        assert mirrored == pytest.approx(gamma.log_gamma(z).conjugate(), rel=1e-14)
