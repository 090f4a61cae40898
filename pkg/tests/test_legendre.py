import cmath
import math

import mpmath
import pytest

from legendre_ep import legendre
from legendre_ep.errors import DomainError, PoleError
from legendre_ep.legendre import EvalPoint, KTauPoint, LaurentPair

RHO2 = math.acosh(2.0)


@pytest.mark.parametrize(
    "mu,nu,z",
    [
        (0.0, 0.0, 5.0),
        (-0.8, -0.5 + 1.2j, 2.0),
        (-2.3, -0.5 + 0.4j, 1.3),
        (0.4 + 0.2j, 1.7, 3.0),
        (-1.5, -0.5 + 6.0j, 10.0),
    ],
)
def test_p_general_matches_mpmath(mu, nu, z):
    expected = complex(mpmath.legenp(nu, mu, z, type=3))
    value = legendre.p_general(EvalPoint.at_argument(mu, nu, z))
    assert abs(value - expected) <= 1e-8 * abs(expected)


def test_p_degree_zero_order_zero_is_one():
    assert legendre.p_general(EvalPoint.at_argument(0.0, 0.0, 5.0)) == pytest.approx(1.0)


@pytest.mark.parametrize("z", [1.5, 2.0, 7.0])
def test_p_order_minus_one_degree_zero(z):
    value = legendre.p_general(EvalPoint.at_argument(-1.0, 0.0, z))
    assert value == pytest.approx(math.sqrt((z - 1) / (z + 1)), rel=1e-12)


def test_closed_forms_at_degree_zero():
    assert legendre.q_closed_mu_minus_half(0.0, RHO2) == pytest.approx(-0.9859067608j, abs=1e-9)
    assert legendre.p_closed_mu_minus_half(0.0, RHO2) == pytest.approx(0.857383, abs=1e-6)


@pytest.mark.parametrize("nu", [0.0, -0.5 + 1.0j, 1.3 - 0.4j, -2.2, -0.5 + 1e-8j])
def test_general_matches_closed_forms(nu):
    pt = EvalPoint(mu=-0.5, nu=nu, rho=RHO2)
    p_closed = legendre.p_closed_mu_minus_half(nu, RHO2)
    assert abs(legendre.p_general(pt) - p_closed) <= 1e-10 * abs(p_closed)
    if abs(nu + 0.5) > 1e-6:
        q_closed = legendre.q_closed_mu_minus_half(nu, RHO2)
        assert abs(legendre.q_general(pt) - q_closed) <= 1e-10 * abs(q_closed)


def test_q_closed_form_pole():
    with pytest.raises(PoleError):
        legendre.q_closed_mu_minus_half(-0.5, RHO2)


def test_q_general_pole_raises():
    with pytest.raises(PoleError) as info:
        legendre.q_general(EvalPoint(mu=-0.5, nu=-0.5, rho=RHO2))
    assert "pole at" in str(info.value)


def test_q_general_residue_aware_near_pole():
    pt = EvalPoint(mu=-0.5, nu=complex(-0.5, 1e-4), rho=RHO2)
    pair = legendre.q_general(pt, residue_aware=True)
    assert isinstance(pair, LaurentPair)
    assert pair.pole == pytest.approx(-0.5)
    assert pair.residue == pytest.approx(-0.9523128068j, abs=1e-8)


def test_q_general_removable_singularity_is_finite():
    value = legendre.q_general(EvalPoint(mu=-1.5, nu=-2.5, rho=RHO2))
    assert cmath.isfinite(value)
    nearby = legendre.q_general(EvalPoint(mu=-1.5, nu=-2.5 + 1e-5, rho=RHO2))
    assert abs(value - nearby) <= 1e-3 * max(abs(nearby), 1e-12)


@pytest.mark.parametrize(
    "K,nu,rho",
    [
        (0.0, -0.5 + 1.0j, RHO2),
        (0.3, -0.5 + 1.3j, 0.4),
        (1.7, -0.5 + 0.2j, 2.5),
        (-0.25, 0.6 - 0.3j, 1.0),
        (2.0, -0.5 + 4.0j, RHO2),
    ],
)
def test_whipple_matches_general(K, nu, rho):
    general = legendre.q_general(EvalPoint(mu=-0.5 - K, nu=nu, rho=rho))
    whipple = legendre.q_via_whipple(K, nu, rho)
    assert abs(whipple - general) <= 1e-9 * abs(general)


@pytest.mark.parametrize("nu", [0.5, 1.5, -1.5, 2.5])
@pytest.mark.parametrize("z", [1e3, 1e4])
def test_p_general_large_argument_integer_gap(nu, z):
    # c - a - b is an integer after the Pfaff map, with the argument close to 1
    with mpmath.workdps(30):
        expected = complex(mpmath.legenp(nu, 0.3, z, type=3))
    value = legendre.p_general(EvalPoint.at_argument(0.3, nu, z))
    assert abs(value - expected) <= 1e-8 * abs(expected)


@pytest.mark.parametrize("mu,tau,z", [(-1.8, 30.0, 2.0), (-1.8, 30.0, 5.0), (-3.5, 45.0, 5.0)])
def test_p_general_conical_large_tau(mu, tau, z):
    nu = complex(-0.5, tau)
    with mpmath.workdps(30):
        expected = complex(mpmath.legenp(nu, mu, z, type=3))
    value = legendre.p_general(EvalPoint.at_argument(mu, nu, z))
    assert abs(value - expected) <= 1e-8 * abs(expected)


def test_whipple_small_rho():
    nu = complex(-0.5, 1.0)
    whipple = legendre.q_via_whipple(0.5, nu, 0.001)
    assert cmath.isfinite(whipple)
    general = legendre.q_general(EvalPoint(mu=-1.0, nu=nu, rho=0.001))
    assert abs(whipple - general) <= 1e-7 * abs(general)


def test_whipple_pole_raises():
    with pytest.raises(PoleError):
        legendre.q_via_whipple(1.0, 0.5, RHO2)


def test_conical_q_uses_conical_line():
    pt = KTauPoint(K=0.3, tau=1.1, rho=RHO2)
    assert pt.nu == complex(-0.5, 1.1)
    assert legendre.conical_q(pt) == legendre.q_via_whipple(0.3, pt.nu, RHO2)


@pytest.mark.parametrize("K", [0.3, -0.25, 1.5])
def test_q_tau_zero_matches_general(K):
    general = legendre.q_general(EvalPoint(mu=-0.5 - K, nu=-0.5, rho=RHO2))
    assert abs(legendre.q_tau_zero(K, RHO2) - general) <= 1e-9 * abs(general)


def test_q_tau_zero_singular_at_integer_K():
    with pytest.raises(PoleError):
        legendre.q_tau_zero(0.0, RHO2)


@pytest.mark.parametrize("K,nu", [(0.3, -0.5 + 0.7j), (0.0, 0.2 + 0.1j), (1.0, -0.5 + 2.0j)])
def test_asymptotic_form_at_large_argument(K, nu):
    for cosh_rho, tolerance in ((1e3, 1e-3), (1e4, 1e-5)):
        rho = math.acosh(cosh_rho)
        general = legendre.q_general(EvalPoint(mu=-0.5 - K, nu=nu, rho=rho))
        asymptotic = legendre.q_asymptotic(K, nu, rho)
        assert abs(asymptotic - general) <= tolerance * abs(general)


def test_asymptotic_zero_at_minus_three_halves():
    assert legendre.q_asymptotic(0.3, -1.5, RHO2) == 0j


def test_order_reflection_recovers_closed_form():
    # P^{-1/2} from P^{1/2} and Q^{1/2}
    nu = -0.5 + 0.9j
    value = legendre.p_order_reflection(0.5, nu, 2.0)
    expected = legendre.p_closed_mu_minus_half(nu, RHO2)
    assert abs(value - expected) <= 1e-8 * abs(expected)


@pytest.mark.parametrize("n,nu,z", [(1, 0.0, 2.0), (2, 1.5, 3.0), (1, -0.5 + 1.0j, 1.5)])
def test_negative_order_matches_direct(n, nu, z):
    direct = legendre.p_general(EvalPoint.at_argument(-n, nu, z))
    assert abs(legendre.p_negative_order(n, nu, z) - direct) <= 1e-9 * abs(direct)


def test_degree_zero_family():
    assert legendre.q_integer_order_degree0(1, 2.0) == pytest.approx(-0.5773503, abs=1e-7)
    assert legendre.q_integer_order_degree0(0, 2.0) == pytest.approx(0.5 * math.log(3.0))
    assert legendre.legendre_p_degree0(0) == 1.0
    assert legendre.legendre_p_degree0(3) == 0.0


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_degree_zero_q_matches_general(n):
    general = legendre.q_general(EvalPoint.at_argument(n, 0.0, 2.0))
    assert general == pytest.approx(legendre.q_integer_order_degree0(n, 2.0), rel=1e-10)


def test_legendre_polynomial():
    assert legendre.legendre_p_integer(0, 2.0) == 1.0
    assert legendre.legendre_p_integer(1, 2.0) == 2.0
    assert legendre.legendre_p_integer(3, 2.0) == pytest.approx(17.0)


def test_ode_residual_small_for_general_functions():
    mu, nu = -0.8, complex(-0.5, 1.2)
    for fn in (
        lambda r: legendre.p_general(EvalPoint(mu=mu, nu=nu, rho=r)),
        lambda r: legendre.q_general(EvalPoint(mu=mu, nu=nu, rho=r)),
    ):
        assert legendre.ode_residual(fn, mu, nu, 1.3) < 1e-5


def test_ode_residual_flags_wrong_function():
    residual = legendre.ode_residual(
        lambda r: legendre.p_general(EvalPoint(mu=-0.8, nu=0.5, rho=r)), -0.8, 1.5, 1.3
    )
    assert residual > 1e-2


def test_eval_point_domain():
    with pytest.raises(DomainError):
        EvalPoint(mu=0, nu=0, rho=0.0)
    with pytest.raises(DomainError):
        EvalPoint.at_argument(0, 0, 1.0)
    with pytest.raises(DomainError):
        KTauPoint(K=0, tau=-1.0, rho=1.0)


def test_eval_point_at_coth():
    pt = EvalPoint.at_coth(0.2, 0.1, 0.7)
    assert pt.cosh == pytest.approx(1.0 / math.tanh(0.7), rel=1e-14)
