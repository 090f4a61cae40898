import math

import pytest

from legendre_ep import legendre, norms
from legendre_ep.errors import ConvergenceError, DivergenceError, DomainError
from legendre_ep.legendre import KTauPoint

RHO2 = math.acosh(2.0)


@pytest.mark.parametrize("K,tau", [(0.3, 1.2), (-0.25, 0.05), (1.6, 4.0), (-0.45, 12.0)])
def test_integrand_is_squared_magnitude(K, tau):
    direct = abs(legendre.conical_q(KTauPoint(K, tau, RHO2))) ** 2
    assert norms.integrand(K, tau, RHO2) == pytest.approx(direct, rel=1e-9)


@pytest.mark.parametrize("K,tau,rho", [(0.3, 1.2, RHO2), (-0.45, 0.05, 0.5), (1.9, 7.5, 2.8)])
def test_product_form_is_real(K, tau, rho):
    value = norms.product_form(K, tau, rho)
    assert abs(value.imag) <= norms.IMAGINARY_TOLERANCE * abs(value)
    assert norms.integrand(K, tau, rho) == value.real


def test_integrand_rejects_complex_product(monkeypatch):
    monkeypatch.setattr(norms, "product_form", lambda K, tau, rho: 1.0 + 1e-3j)
    with pytest.raises(ConvergenceError):
        norms.integrand(0.3, 1.0, RHO2)


def test_integrand_large_tau_follows_power_law():
    K, tau = 0.3, 400.0
    leading = math.pi / (2.0 * math.sinh(RHO2)) * tau ** (-2.0 - 2.0 * K)
    assert norms.integrand(K, tau, RHO2) == pytest.approx(leading, rel=1e-3)


def test_adaptive_quadrature_simple_integral():
    value, error, evaluations = norms.adaptive_quadrature(math.sin, [0.0, math.pi], 1e-12)
    assert value == pytest.approx(2.0, abs=1e-12)
    assert error <= 1e-12
    assert evaluations >= 15


def test_adaptive_quadrature_panel_limit():
    with pytest.raises(ConvergenceError):
        norms.adaptive_quadrature(
            lambda x: math.sin(1000.0 * x), [0.0, 10.0], 1e-10, panel_limit=3
        )


def test_adaptive_quadrature_uses_interior_breakpoints():
    # kink at 1/3 is only resolved cheaply when passed as a breakpoint
    f = lambda x: abs(x - 1.0 / 3.0)
    value, error, _ = norms.adaptive_quadrature(f, [0.0, 1.0 / 3.0, 1.0], 1e-12)
    assert value == pytest.approx((1.0 / 9.0 + 4.0 / 9.0) / 2.0, abs=1e-12)
    assert error <= 1e-12


@pytest.mark.parametrize("cosh_rho", [1.5, 2.0, 5.0])
@pytest.mark.parametrize("K", [-0.4, -0.25, -0.1])
def test_quadrature_matches_residue_series(K, cosh_rho):
    rho = math.acosh(cosh_rho)
    quadrature = norms.norm_quadrature(K, rho)
    series = norms.norm_residue_series(K, rho)
    assert series.value == pytest.approx(quadrature.value, rel=1e-6)
    assert series.imaginary_residual < 1e-9


def test_quadrature_result_fields():
    result = norms.norm_quadrature(-0.25, RHO2)
    assert result.value > 0.0
    assert result.abs_error_estimate <= 1e-9
    assert result.evaluations > 0
    assert result.tail_cut >= 2.0 * norms.TAIL_SWITCH


def test_full_line_matches_half_line():
    half = norms.norm_quadrature(-0.25, RHO2)
    full = norms.norm_full_line(-0.25, RHO2)
    assert full.value == pytest.approx(half.value, rel=1e-8)


@pytest.mark.parametrize("K", [0.3, 1.2])
def test_extended_series_matches_quadrature(K):
    quadrature = norms.norm_quadrature(K, RHO2)
    series = norms.norm_residue_series(K, RHO2, extended=True)
    assert series.value == pytest.approx(quadrature.value, rel=1e-5)


@pytest.mark.parametrize("K", [0.0, 1.0, 2.0, -0.5, -0.75])
def test_quadrature_rejects_divergent_K(K):
    with pytest.raises(DivergenceError):
        norms.norm_quadrature(K, RHO2)


def test_residue_series_domain():
    with pytest.raises(DomainError):
        norms.norm_residue_series(0.3, RHO2)
    with pytest.raises(DomainError):
        norms.norm_residue_series(-0.6, RHO2)
    with pytest.raises(DomainError):
        norms.norm_residue_series(0.5, RHO2, extended=True)
    with pytest.raises(DivergenceError):
        norms.norm_residue_series(1.0, RHO2, extended=True)


def test_tail_check_leading_order():
    check = norms.tail_check(0.3, RHO2)
    assert check.relative_error < 1e-2


def test_regularized_k0_constant():
    result = norms.norm_regularized_k0(RHO2, 0.1)
    assert result.analytic == pytest.approx(14.24554, abs=1e-5)
    assert result.relative_error < 1e-6


@pytest.mark.parametrize("epsilon", [1e-4, 1e-2, 1.0])
def test_regularized_k0_full_line(epsilon):
    result = norms.norm_regularized_k0(RHO2, epsilon, full_line=True)
    assert result.relative_error < 1e-6


def test_regularized_k0_domain():
    with pytest.raises(DomainError):
        norms.norm_regularized_k0(RHO2, 0.0)


def test_collapse_demo_approaches_single_pole():
    rows = norms.collapse_demo(RHO2, [1e-2, 1e-3, 1e-4])
    assert [row.epsilon for row in rows] == [1e-2, 1e-3, 1e-4]
    errors = [abs(row.ratio - 1.0) for row in rows]
    assert errors[2] < errors[0]
    assert errors[1] < 5e-3
    assert errors[2] < 5e-4
    shares = [abs(row.tail_sum / row.n0_term) for row in rows]
    assert shares[2] < shares[1] < shares[0]
    assert shares[2] < 1e-3


def test_collapse_demo_domain():
    with pytest.raises(DomainError):
        norms.collapse_demo(RHO2, [0.7])
