import math

import numpy as np
import pytest

from legendre_ep import verify
from legendre_ep.errors import UsageError


def test_registry_covers_required_identities():
    assert verify.coverage() == verify.REQUIRED_COVERAGE


def test_checks_keep_declaration_order():
    names = list(verify.CHECKS)
    assert names[0] == "ode"
    assert names.index("gamma") < names.index("hyp2f1_euler")


def test_select_by_regex():
    assert verify.select("^gamma$") == ["gamma"]
    assert verify.select(None) == list(verify.CHECKS)


def test_select_unknown_lists_available():
    with pytest.raises(UsageError) as info:
        verify.select("no_such_check")
    assert "whipple" in str(info.value)


def test_select_invalid_regex():
    with pytest.raises(UsageError):
        verify.select("(")


@pytest.mark.parametrize("name", list(verify.CHECKS))
def test_every_check_passes(name):
    report = verify.run_check(name)
    assert report.passed, report.failures
    assert report.samples_run >= verify.CHECKS[name][0].sample_count
    assert report.worst_relative_error <= report.tolerance


def test_run_check_is_deterministic():
    first = verify.run_check("closed_form", seed=7)
    second = verify.run_check("closed_form", seed=7)
    assert first.worst_relative_error == second.worst_relative_error
    assert first.worst_case_inputs == second.worst_case_inputs


def test_run_suite_filtered_order():
    reports = verify.run_suite("^(degree_zero_q|gamma)$")
    assert [r.name for r in reports] == ["gamma", "degree_zero_q"]


def test_report_to_dict_and_summary():
    report = verify.CheckReport(
        name="demo",
        passed=False,
        worst_relative_error=0.5,
        worst_case_inputs={"K": 0.3},
        samples_run=4,
        tolerance=1e-6,
        failures=["K:0.3: PoleError: pole at -0.5"],
    )
    data = report.to_dict()
    assert data["worst_case_inputs"] == {"K": 0.3}
    assert data["failures"] == ["K:0.3: PoleError: pole at -0.5"]
    table = verify.summary_table([report])
    assert "demo" in table and "FAIL" in table


def test_check_spec_validation():
    with pytest.raises(ValueError):
        verify.CheckSpec(name="bad", sampler="", tolerance=0.0, sample_count=1)


def test_relative_error_floor():
    assert verify.relative_error(2.0, 0.0) == pytest.approx(2e300)


def test_sweep_sizes():
    assert verify.CHECKS["whipple"][0].sample_count == 500
    assert verify.CHECKS["ode"][0].sample_count == 200
    assert verify.CHECKS["gamma"][0].sample_count == 1000


def test_full_suite_passes():
    reports = verify.run_suite(jobs=4)
    assert [r.name for r in reports] == list(verify.CHECKS)
    assert all(r.passed for r in reports), [(r.name, r.failures) for r in reports if not r.passed]


def test_near_pole_whipple_records_failure(monkeypatch):
    spec = verify.CHECKS["whipple"][0]
    tracker = verify._Tracker(spec)
    verify._near_pole_whipple(tracker, 0.3, 1.0)
    assert not tracker.failures
    monkeypatch.setattr(verify.legendre, "q_via_whipple", lambda K, nu, rho: 0j)
    verify._near_pole_whipple(tracker, 0.3, 1.0)
    assert len(tracker.failures) == 1 and "near pole" in tracker.failures[0]


def test_product_identity_flags_imaginary_part(monkeypatch):
    monkeypatch.setattr(verify.norms, "product_form", lambda K, tau, rho: 1.0 + 1e-6j)
    report = verify.run_check("product_identity")
    assert not report.passed
    assert any("imaginary part" in failure for failure in report.failures)


def test_gamma_samples_stay_off_the_poles():
    rng = np.random.default_rng(0)
    for _ in range(200):
        re, im = verify._disk_sample(rng)
        assert math.hypot(re, im) <= verify.GAMMA_DISK_RADIUS
    sample = verify._away(
        rng,
        verify._disk_sample,
        lambda re, im: complex(re, im),
        margin=verify.GAMMA_POLE_MARGIN,
    )
    assert verify._distance_to_poles(complex(*sample)) >= verify.GAMMA_POLE_MARGIN
