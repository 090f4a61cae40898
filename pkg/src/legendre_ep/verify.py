"""
Identity verification runner.

Each check samples parameters from a seeded numpy generator, evaluates an
identity two independent ways and records the worst relative error. A check
passes when nothing failed and the worst error is within its tolerance.

Checks are registered in declaration order; every check names the identities
it covers and run_suite refuses to report on an unfiltered run that leaves a
required identity uncovered.
"""

from __future__ import annotations

import cmath
import logging
import math
import re
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np

from legendre_ep import legendre, norms, polescan
from legendre_ep.errors import LegendreError, UsageError
from legendre_ep.gamma import gamma, recip_gamma, sinpi
from legendre_ep.hyp2f1 import HypParams, hyp2f1
from legendre_ep.legendre import EvalPoint

LOG = logging.getLogger(__name__)

DEFAULT_SEED = 0
SINGULAR_MARGIN = 1e-2
GAMMA_POLE_MARGIN = 0.1
GAMMA_DISK_RADIUS = 50.0
RECURRENCE_TOLERANCE = 1e-12
NEAR_POLE_OFFSET = 1e-3
NEAR_POLE_TOLERANCE = 1e-6

REQUIRED_COVERAGE = frozenset(
    {
        "legendre-ode",
        "conical-eigenvalue",
        "hypergeometric-representation",
        "closed-form-mu-minus-half",
        "large-argument-form",
        "exceptional-point-pattern",
        "whipple-relation",
        "tau-zero-singularity",
        "product-form-integrand",
        "order-reflection",
        "degree-zero-family",
        "normalization-quadrature",
        "residue-series",
        "regularized-k0",
        "pole-collapse",
        "gamma-kernel",
        "hypergeometric-transformations",
    }
)


@dataclass(frozen=True)
class CheckSpec:
    """
    Declaration of one identity check.

    Attributes:
        name: Registry key, matched by the suite filter
        sampler: Description of the sampled parameter ranges
        tolerance: Largest acceptable relative error
        sample_count: Number of samples drawn
        covers: Identities exercised by the check
    """

    name: str
    sampler: str
    tolerance: float
    sample_count: int
    covers: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.tolerance > 0.0:
            raise ValueError(f"Check tolerance must be positive: {self.name}")
        if self.sample_count < 1:
            raise ValueError(f"Check needs at least one sample: {self.name}")


@dataclass
class CheckReport:
    name: str
    passed: bool
    worst_relative_error: float
    worst_case_inputs: dict[str, float]
    samples_run: int
    tolerance: float
    failures: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


class _Tracker:
    """Accumulates sample errors for one check."""

    def __init__(self, spec: CheckSpec):
        self.spec = spec
        self.worst = 0.0
        self.worst_inputs: dict[str, float] = {}
        self.samples = 0
        self.failures: list[str] = []

    def run(self, inputs: dict[str, float], error_fn: Callable[[], float]):
        self.samples += 1
        try:
            error = float(error_fn())
        except (LegendreError, ArithmeticError) as exc:
            self.failures.append(f"{_describe(inputs)}: {type(exc).__name__}: {exc}")
            return
        if math.isnan(error):
            error = math.inf
        if error > self.worst or not self.worst_inputs:
            self.worst = error
            self.worst_inputs = dict(inputs)

    def fail(self, inputs: dict[str, float], message: str):
        self.failures.append(f"{_describe(inputs)}: {message}")

    def report(self) -> CheckReport:
        passed = not self.failures and self.worst <= self.spec.tolerance
        return CheckReport(
            name=self.spec.name,
            passed=passed,
            worst_relative_error=self.worst,
            worst_case_inputs=self.worst_inputs,
            samples_run=self.samples,
            tolerance=self.spec.tolerance,
            failures=self.failures,
        )


CheckFn = Callable[[CheckSpec, np.random.Generator], CheckReport]
CHECKS: dict[str, tuple[CheckSpec, CheckFn]] = {}


def _check(name: str, sampler: str, tolerance: float, samples: int, covers: tuple[str, ...]):
    def _register(fn: CheckFn) -> CheckFn:
        spec = CheckSpec(
            name=name,
            sampler=sampler,
            tolerance=tolerance,
            sample_count=samples,
            covers=covers,
        )
        CHECKS[name] = (spec, fn)
        return fn

    return _register


def _describe(inputs: dict[str, float]) -> str:
    return " ".join(f"{k}:{v:.6g}" for k, v in inputs.items())


def relative_error(value: complex, reference: complex, floor: float = 1e-300) -> float:
    return abs(value - reference) / max(abs(reference), floor)


def _distance_to_poles(z: complex) -> float:
    """Distance from z to the nearest nonpositive integer."""
    z = complex(z)
    if z.real > 0.0:
        return abs(z)
    return abs(z - round(z.real))


def _away(
    rng: np.random.Generator,
    draw: Callable[[np.random.Generator], tuple],
    *shifts,
    margin: float = SINGULAR_MARGIN,
) -> tuple:
    """Redraw until every shift(sample) keeps margin from the gamma poles."""
    while True:
        sample = draw(rng)
        if all(_distance_to_poles(shift(*sample)) >= margin for shift in shifts):
            return sample


@_check(
    "ode",
    sampler="K in [-1.5, 2]; nu real in [-0.4, 2.5] or conical tau in [0.05, 3]; rho in [0.5, 2.5]",
    tolerance=1e-5,
    samples=200,
    covers=("legendre-ode", "conical-eigenvalue", "hypergeometric-representation"),
)
def check_ode(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    for i in range(spec.sample_count):
        if i % 2:
            K, tau, rho = rng.uniform(-1.5, 2.0), rng.uniform(0.05, 3.0), rng.uniform(0.5, 2.5)
            nu = complex(-0.5, tau)
        else:
            K, re_nu, rho = _away(
                rng,
                lambda r: (r.uniform(-1.5, 2.0), r.uniform(-0.4, 2.5), r.uniform(0.5, 2.5)),
                lambda K, nu, rho: nu + 0.5 - K,
            )
            nu = complex(re_nu)
        mu = complex(-0.5 - K)
        inputs = {"K": K, "nu_re": nu.real, "nu_im": nu.imag, "rho": rho}
        for evaluator in (legendre.p_general, legendre.q_general):
            tracker.run(
                {**inputs, "q": float(evaluator is legendre.q_general)},
                lambda: legendre.ode_residual(
                    lambda r: evaluator(EvalPoint(mu=mu, nu=nu, rho=r)), mu, nu, rho
                ),
            )
    return tracker.report()


@_check(
    "whipple",
    sampler=(
        "K in [-1.5, 2]; nu conical tau in [0.05, 3] or real in [-3, 2]; rho in [0.5, 3]; "
        "every tenth K also at nu = K - 1/2 + 1e-3"
    ),
    tolerance=1e-9,
    samples=500,
    covers=("whipple-relation", "exceptional-point-pattern"),
)
def check_whipple(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    for i in range(spec.sample_count):
        if i % 2:
            K, tau, rho = rng.uniform(-1.5, 2.0), rng.uniform(0.05, 3.0), rng.uniform(0.5, 3.0)
            nu = complex(-0.5, tau)
        else:
            K, re_nu, rho = _away(
                rng,
                lambda r: (r.uniform(-1.5, 2.0), r.uniform(-3.0, 2.0), r.uniform(0.5, 3.0)),
                lambda K, nu, rho: nu + 0.5 - K,
                lambda K, nu, rho: nu + 1.5,
            )
            nu = complex(re_nu)
        tracker.run(
            {"K": K, "nu_re": nu.real, "nu_im": nu.imag, "rho": rho},
            lambda: relative_error(
                legendre.q_via_whipple(K, nu, rho),
                legendre.q_general(EvalPoint(mu=-0.5 - K, nu=nu, rho=rho)),
            ),
        )
        if i % 10 == 0:
            _near_pole_whipple(tracker, K, rho)
    # K = -1: every candidate pole cancels, both sides stay finite
    _near_pole_whipple(tracker, -1.0, polescan.DEFAULT_RHO)
    return tracker.report()


def _near_pole_whipple(tracker: "_Tracker", K: float, rho: float):
    """Both sides of Whipple at nu = K - 1/2 + 1e-3, where gamma(1e-3) dominates."""
    nu = complex(K - 0.5 + NEAR_POLE_OFFSET)
    inputs = {"K": K, "nu_re": nu.real, "nu_im": 0.0, "rho": rho}
    try:
        whipple = legendre.q_via_whipple(K, nu, rho)
        direct = legendre.q_general(EvalPoint(mu=-0.5 - K, nu=nu, rho=rho))
    except (LegendreError, ArithmeticError) as exc:
        tracker.fail(inputs, f"near pole: {type(exc).__name__}: {exc}")
        return
    error = relative_error(whipple, direct)
    if not error <= NEAR_POLE_TOLERANCE:
        tracker.fail(inputs, f"near pole: relative error {error:.3g}")


@_check(
    "product_identity",
    sampler="K in (-0.45, 2); tau in [0.05, 5]; rho in [0.5, 3]",
    tolerance=1e-8,
    samples=100,
    covers=("product-form-integrand",),
)
def check_product_identity(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    for _ in range(spec.sample_count):
        K, tau, rho = rng.uniform(-0.45, 2.0), rng.uniform(0.05, 5.0), rng.uniform(0.5, 3.0)
        inputs = {"K": K, "tau": tau, "rho": rho}

        def _error(K=K, tau=tau, rho=rho, inputs=inputs) -> float:
            direct = legendre.q_general(legendre.KTauPoint(K, tau, rho).eval_point())
            product = norms.product_form(K, tau, rho)
            imaginary = abs(product.imag) / abs(product)
            if imaginary > norms.IMAGINARY_TOLERANCE:
                tracker.fail(inputs, f"imaginary part {imaginary:.3g} of the product form")
            return relative_error(product.real, abs(direct) ** 2)

        tracker.run(inputs, _error)
    return tracker.report()


@_check(
    "negative_order",
    sampler="integer n in 0..4 or mu in [0.1, 2.4]; nu in [-0.8, 3.5]; z in [1.2, 6]",
    tolerance=1e-9,
    samples=100,
    covers=("order-reflection",),
)
def check_negative_order(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    for i in range(spec.sample_count):
        if i % 2:
            mu = float(rng.integers(0, 5))
        else:
            mu = rng.uniform(0.1, 2.4)
        nu, z = _away(
            rng,
            lambda r: (r.uniform(-0.8, 3.5), r.uniform(1.2, 6.0)),
            lambda nu, z, mu=mu: nu - mu + 1.0,
        )

        def _error(mu=mu, nu=nu, z=z) -> float:
            if mu.is_integer():
                value = legendre.p_negative_order(int(mu), nu, z)
            else:
                value = legendre.p_order_reflection(mu, nu, z)
            return relative_error(value, legendre.p_general(EvalPoint.at_argument(-mu, nu, z)))

        tracker.run({"mu": mu, "nu": nu, "z": z}, _error)
    return tracker.report()


@_check(
    "singular_limit",
    sampler="m in {0, 1, 2}; rho in [0.5, 2]; K = m + 1e-4, m + 1e-5",
    tolerance=1e-7,
    samples=30,
    covers=("tau-zero-singularity",),
)
def check_singular_limit(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    for i in range(spec.sample_count):
        m, rho = i % 3, rng.uniform(0.5, 2.0)

        def _error(m=m, rho=rho) -> float:
            def scaled(eps: float) -> complex:
                return eps * legendre.q_tau_zero(m + eps, rho)

            extrapolated = (10.0 * scaled(1e-5) - scaled(1e-4)) / 9.0
            z = 1.0 / math.tanh(rho)
            limit = (
                1j
                * math.sqrt(math.pi / (2.0 * math.sinh(rho)))
                * legendre.legendre_p_integer(m, z)
                / math.factorial(m)
            )
            return relative_error(extrapolated, limit)

        tracker.run({"m": m, "rho": rho}, _error)
    # the negative-integer side has no singularity at all
    tracker.run(
        {"K": -1.0, "rho": 1.0},
        lambda: 0.0 if cmath.isfinite(legendre.q_tau_zero(-1.0, 1.0)) else math.inf,
    )
    return tracker.report()


@_check(
    "closed_form",
    sampler="nu in [-2, 2] x [-2, 2]i away from -1/2 - n; rho in [0.5, 3]",
    tolerance=1e-10,
    samples=100,
    covers=("closed-form-mu-minus-half", "hypergeometric-representation"),
)
def check_closed_form(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    for _ in range(spec.sample_count):
        re_nu, im_nu, rho = _away(
            rng,
            lambda r: (r.uniform(-2.0, 2.0), r.uniform(-2.0, 2.0), r.uniform(0.5, 3.0)),
            lambda re, im, rho: complex(re + 0.5, im),
        )
        nu = complex(re_nu, im_nu)
        pt = EvalPoint(mu=-0.5, nu=nu, rho=rho)
        inputs = {"nu_re": re_nu, "nu_im": im_nu, "rho": rho}
        tracker.run(
            inputs,
            lambda: relative_error(legendre.q_general(pt), legendre.q_closed_mu_minus_half(nu, rho)),
        )
        tracker.run(
            inputs,
            lambda: relative_error(legendre.p_general(pt), legendre.p_closed_mu_minus_half(nu, rho)),
        )
    return tracker.report()


@_check(
    "asymptotic",
    sampler="K in [-1.5, 2]; nu in [-1, 1] + [0.1, 2]i; cosh rho = 1e4",
    tolerance=1e-5,
    samples=20,
    covers=("large-argument-form",),
)
def check_asymptotic(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    rho = math.acosh(1e4)
    for _ in range(spec.sample_count):
        K = rng.uniform(-1.5, 2.0)
        nu = complex(rng.uniform(-1.0, 1.0), rng.uniform(0.1, 2.0))
        tracker.run(
            {"K": K, "nu_re": nu.real, "nu_im": nu.imag},
            lambda: abs(
                legendre.q_general(EvalPoint(mu=-0.5 - K, nu=nu, rho=rho))
                / legendre.q_asymptotic(K, nu, rho)
                - 1.0
            ),
        )
    return tracker.report()


@_check(
    "gamma",
    sampler="z uniform on the disk |z| <= 50, 0.1 away from the poles of gamma(z) and gamma(1 - z)",
    tolerance=1e-11,
    samples=1000,
    covers=("gamma-kernel",),
)
def check_gamma(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    for _ in range(spec.sample_count):
        re, im = _away(
            rng,
            _disk_sample,
            lambda re, im: complex(re, im),
            lambda re, im: complex(1.0 - re, -im),
            margin=GAMMA_POLE_MARGIN,
        )
        z = complex(re, im)
        inputs = {"re": re, "im": im}
        tracker.run(
            inputs,
            lambda: relative_error(gamma(z) * gamma(1.0 - z) * sinpi(z), math.pi),
        )
        recurrence = relative_error(gamma(z + 1.0), z * gamma(z))
        if not recurrence <= RECURRENCE_TOLERANCE:
            tracker.fail(inputs, f"recurrence relative error {recurrence:.3g}")
        tracker.run(inputs, lambda: recurrence)
        tracker.run(inputs, lambda: abs(gamma(z) * recip_gamma(z) - 1.0))
    return tracker.report()


def _disk_sample(rng: np.random.Generator) -> tuple[float, float]:
    radius = GAMMA_DISK_RADIUS * math.sqrt(rng.uniform())
    angle = rng.uniform(-math.pi, math.pi)
    return radius * math.cos(angle), radius * math.sin(angle)


@_check(
    "hyp2f1_euler",
    sampler="a, b in [-2, 2] x [-1, 1]i; c in [0.5, 3] x [-1, 1]i; x in (-5, 0.9)",
    tolerance=1e-10,
    samples=500,
    covers=("hypergeometric-transformations",),
)
def check_hyp2f1_euler(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    for _ in range(spec.sample_count):
        a = complex(rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0))
        b = complex(rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0))
        c = complex(rng.uniform(0.5, 3.0), rng.uniform(-1.0, 1.0))
        x = rng.uniform(-5.0, 0.9)

        def _error(a=a, b=b, c=c, x=x) -> float:
            direct = hyp2f1(HypParams(a, b, c, x))
            euler = cmath.exp((c - a - b) * math.log1p(-x)) * hyp2f1(HypParams(c - a, c - b, c, x))
            # unit floor: F can pass near zero for complex parameters
            return abs(direct - euler) / max(abs(direct), 1.0)

        tracker.run({"a_re": a.real, "b_re": b.real, "c_re": c.real, "x": x}, _error)
    return tracker.report()


_RESIDUE_KS = (-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0)
_EXPECTED_KIND = {
    -1.5: polescan.EPKind.INFINITE,
    -1.0: polescan.EPKind.NONE,
    -0.5: polescan.EPKind.INFINITE,
    0.0: polescan.EPKind.FINITE,
    0.5: polescan.EPKind.INFINITE,
    1.0: polescan.EPKind.FINITE,
    1.5: polescan.EPKind.INFINITE,
    2.0: polescan.EPKind.FINITE,
}


@_check(
    "residues",
    sampler="K in {-1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2}; default window; cosh rho = 2",
    tolerance=1e-6,
    samples=len(_RESIDUE_KS),
    covers=("exceptional-point-pattern", "whipple-relation"),
)
def check_residues(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    rho = polescan.DEFAULT_RHO
    for K in _RESIDUE_KS:
        classification = polescan.classify_exceptional(K)
        if classification.kind is not _EXPECTED_KIND[K]:
            tracker.fail({"K": K}, f"classified {classification.kind.value}")

        def _error(K=K) -> float:
            worst = 0.0
            for confirmation in polescan.confirm_poles(K, rho=rho):
                worst = max(worst, confirmation.relative_error)
            for location in polescan.cancelled_locations(K):
                leftover = abs(polescan.numeric_residue(K, location, rho))
                if leftover > 1e-9:
                    tracker.fail({"K": K, "nu": location.real}, f"cancelled residue {leftover:.3g}")
            return worst

        tracker.run({"K": K}, _error)
    return tracker.report()


@_check(
    "norm_methods",
    sampler="K in {-0.4, -0.25, -0.1}; cosh rho in {1.5, 2, 5}",
    tolerance=1e-6,
    samples=9,
    covers=("normalization-quadrature", "residue-series"),
)
def check_norm_methods(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    for K in (-0.4, -0.25, -0.1):
        for cosh_rho in (1.5, 2.0, 5.0):
            rho = math.acosh(cosh_rho)
            tracker.run(
                {"K": K, "cosh_rho": cosh_rho},
                lambda K=K, rho=rho: relative_error(
                    norms.norm_residue_series(K, rho).value,
                    norms.norm_quadrature(K, rho).value,
                ),
            )
    return tracker.report()


@_check(
    "collapse",
    sampler="epsilon in {1e-3, 1e-4} at cosh rho = 2; regularized epsilon in {1e-4, 1e-2, 1}",
    tolerance=5e-3,
    samples=6,
    covers=("pole-collapse", "regularized-k0"),
)
def check_collapse(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    rho = polescan.DEFAULT_RHO
    rows = {}

    def _ratio_error(epsilon: float) -> float:
        row = norms.collapse_demo(rho, [epsilon])[0]
        rows[epsilon] = row
        return abs(row.ratio - 1.0)

    for epsilon in (1e-3, 1e-4):
        tracker.run({"epsilon": epsilon}, lambda epsilon=epsilon: _ratio_error(epsilon))
    if 1e-4 in rows and abs(rows[1e-4].tail_sum) > 1e-3 * abs(rows[1e-4].n0_term):
        tracker.fail({"epsilon": 1e-4}, "n >= 1 tail not suppressed")
    for epsilon in (1e-4, 1e-2, 1.0):
        tracker.run(
            {"epsilon": epsilon},
            lambda epsilon=epsilon: norms.norm_regularized_k0(rho, epsilon).relative_error,
        )
    return tracker.report()


@_check(
    "degree_zero_q",
    sampler="n in 0..4; z in [1.1, 6]",
    tolerance=1e-10,
    samples=50,
    covers=("degree-zero-family",),
)
def check_degree_zero_q(spec: CheckSpec, rng: np.random.Generator) -> CheckReport:
    tracker = _Tracker(spec)
    for i in range(spec.sample_count):
        n, z = i % 5, rng.uniform(1.1, 6.0)
        pt = EvalPoint.at_argument(n, 0.0, z)
        inputs = {"n": n, "z": z}
        tracker.run(
            inputs,
            lambda: abs(legendre.q_general(pt) - legendre.q_integer_order_degree0(n, z))
            / max(abs(legendre.q_integer_order_degree0(n, z)), 1.0),
        )
        tracker.run(
            inputs, lambda: abs(legendre.p_general(pt) - legendre.legendre_p_degree0(n))
        )
    return tracker.report()


def coverage(names: list[str] | None = None) -> frozenset[str]:
    selected = CHECKS if names is None else {n: CHECKS[n] for n in names}
    return frozenset(tag for spec, _ in selected.values() for tag in spec.covers)


def select(filter_pattern: str | None) -> list[str]:
    """
    Names of the checks whose name matches filter_pattern (regex search).

    Raises:
        UsageError: When the pattern is invalid or matches nothing
    """
    if not filter_pattern:
        return list(CHECKS)
    try:
        pattern = re.compile(filter_pattern)
    except re.error as exc:
        raise UsageError(f"Invalid check filter {filter_pattern!r}: {exc}") from exc
    names = [name for name in CHECKS if pattern.search(name)]
    if not names:
        raise UsageError(
            f"No checks match {filter_pattern!r}; available: {', '.join(CHECKS)}"
        )
    return names


def run_check(name: str, seed: int = DEFAULT_SEED) -> CheckReport:
    """Run one registered check with a generator derived from (seed, position)."""
    spec, fn = CHECKS[name]
    rng = np.random.default_rng([seed, list(CHECKS).index(name)])
    report = fn(spec, rng)
    LOG.info(
        "Check %s - passed:%s worst:%.3g samples:%s",
        name,
        report.passed,
        report.worst_relative_error,
        report.samples_run,
    )
    return report


def run_suite(
    filter_pattern: str | None = None, seed: int = DEFAULT_SEED, jobs: int = 1
) -> list[CheckReport]:
    """
    Run the selected checks, optionally in worker processes. Reports come back
    in declaration order whatever the completion order.
    """
    names = select(filter_pattern)
    if filter_pattern is None:
        missing = REQUIRED_COVERAGE - coverage(names)
        if missing:
            raise RuntimeError(f"Verification suite leaves identities uncovered: {sorted(missing)}")
    LOG.info("Running checks - count:%s seed:%s jobs:%s", len(names), seed, jobs)
    if jobs <= 1:
        return [run_check(name, seed) for name in names]
    reports: dict[str, CheckReport] = {}
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        futures = {executor.submit(run_check, name, seed): name for name in names}
        for future in as_completed(futures):
            reports[futures[future]] = future.result()
    return [reports[name] for name in names]


def summary_table(reports: list[CheckReport]) -> str:
    lines = [f"{'check':<18} {'result':<6} {'worst':>10} {'tol':>8} {'samples':>8}"]
    for report in reports:
        lines.append(
            f"{report.name:<18} {'PASS' if report.passed else 'FAIL':<6} "
            f"{report.worst_relative_error:>10.3g} {report.tolerance:>8.0e} {report.samples_run:>8}"
        )
    return "\n".join(lines)
