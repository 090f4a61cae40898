"""
Main entry point for the legendre-ep CLI.

Commands:
- eval: P, Q, Q via Whipple, or the large-argument Q at one point
- polescan: log-magnitude grid of Q plus the predicted pole records
- eptable: exceptional-point classification over a range of K
- norm: normalization integral by quadrature, residue series or the K = 0 regularization
- collapse: n = 0 versus n >= 1 pole contributions as K -> 0-
- verify: identity verification suite

Exit codes: 0 success, 1 failed verification, 2 pole or domain error,
3 I/O error, 4 usage error.
"""

import enum
import functools
import logging
import math
import pathlib
import sys
from typing import Annotated, Callable

import typer

from legendre_ep import config, legendre, norms, polescan, records, verify
from legendre_ep.errors import (
    ConvergenceError,
    DomainError,
    LegendreError,
    PoleError,
    UsageError,
)

LOG = logging.getLogger(__name__)

EXIT_FAILED = 1
EXIT_DOMAIN = 2
EXIT_IO = 3
EXIT_USAGE = 4

app = typer.Typer()


class EvalKind(str, enum.Enum):
    P = "P"
    Q = "Q"
    Q_WHIPPLE = "Q_whipple"
    Q_ASYMPTOTIC = "Q_asymptotic"


class NormMethod(str, enum.Enum):
    QUADRATURE = "quadrature"
    SERIES = "series"
    REGULARIZED = "regularized"
    ALL = "all"


class OutputFormat(str, enum.Enum):
    JSON = "json"
    CSV = "csv"
    TABLE = "table"


RhoOption = Annotated[
    float | None, typer.Option("--rho", help="Radial coordinate rho > 0.")
]
CoshRhoOption = Annotated[
    float | None,
    typer.Option("--cosh-rho", help="Argument cosh(rho) > 1, instead of --rho."),
]


def _exit_codes(fn: Callable) -> Callable:
    """Map package errors onto the CLI exit-code contract."""

    @functools.wraps(fn)
    def _wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except UsageError as exc:
            LOG.error("Usage error - %s", exc)
            raise typer.Exit(EXIT_USAGE)
        except (PoleError, DomainError) as exc:
            LOG.error("%s", exc)
            raise typer.Exit(EXIT_DOMAIN)
        except ConvergenceError as exc:
            LOG.error("Not converged - %s", exc)
            raise typer.Exit(EXIT_DOMAIN)
        except OSError as exc:
            LOG.error("I/O error - %s", exc)
            raise typer.Exit(EXIT_IO)

    return _wrapper


def _settings(ctx: typer.Context) -> config.Settings:
    if isinstance(ctx.obj, config.Settings):
        return ctx.obj
    return config.settings()


def _resolve_rho(settings: config.Settings, rho: float | None, cosh_rho: float | None) -> float:
    if rho is not None and cosh_rho is not None:
        raise UsageError("--rho and --cosh-rho are mutually exclusive")
    if rho is not None:
        if not rho > 0.0:
            raise DomainError(f"rho must be positive: {rho}")
        return rho
    if cosh_rho is None:
        cosh_rho = settings.cosh_rho
    if not cosh_rho > 1.0:
        raise DomainError(f"cosh(rho) must be > 1: {cosh_rho}")
    return math.acosh(cosh_rho)


def _parse_complex(text: str | None, name: str) -> complex | None:
    if text is None:
        return None
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"{name} is not a complex number: {text!r}") from None


def _emit(record: dict, output_format: OutputFormat, header: bool = True):
    if output_format is OutputFormat.CSV:
        names, cells = records.csv_row(record)
        if header:
            typer.echo(",".join(names))
        typer.echo(",".join(cells))
    else:
        typer.echo(records.dumps(record))


@app.callback()
def _callback(
    ctx: typer.Context,
    log_level: Annotated[
        str | None,
        typer.Option(
            help="Set the log level explicitly (e.g. DEBUG, INFO, WARNING, ERROR)."
        ),
    ] = None,
    config_path: Annotated[
        pathlib.Path | None,
        typer.Option("--config", help="TOML run configuration file."),
    ] = None,
):
    log_level_no = (
        logging.getLevelNamesMapping().get(log_level.upper(), None)
        if log_level
        else None
    )
    if log_level_no is not None:
        logging.root.setLevel(log_level_no)
    try:
        ctx.obj = config.load(config_path) if config_path else config.settings()
    except OSError as exc:
        LOG.error("I/O error - %s", exc)
        raise typer.Exit(EXIT_IO)
    except ValueError as exc:
        LOG.error("Usage error - %s", exc)
        raise typer.Exit(EXIT_USAGE)


@app.command("eval")
@_exit_codes
def eval_(
    ctx: typer.Context,
    kind: Annotated[EvalKind, typer.Argument(help="Function to evaluate.")],
    mu: Annotated[str | None, typer.Option(help="Complex order, e.g. -0.5+1i.")] = None,
    nu: Annotated[str | None, typer.Option(help="Complex degree.")] = None,
    k: Annotated[
        float | None, typer.Option("--K", "--k", help="Order shift, mu = -1/2 - K.")
    ] = None,
    tau: Annotated[
        float | None, typer.Option(help="Conical parameter, nu = -1/2 + i tau.")
    ] = None,
    rho: RhoOption = None,
    cosh_rho: CoshRhoOption = None,
    output_format: Annotated[
        OutputFormat, typer.Option("--format", help="json or csv.")
    ] = OutputFormat.JSON,
):
    """
    Evaluate a Legendre function at one point.
    """
    rho_value = _resolve_rho(_settings(ctx), rho, cosh_rho)
    mu_value = _parse_complex(mu, "--mu")
    nu_value = _parse_complex(nu, "--nu")
    if (mu_value is None) == (k is None):
        raise UsageError("give exactly one of --mu and --K")
    if (nu_value is None) == (tau is None):
        raise UsageError("give exactly one of --nu and --tau")
    if mu_value is None:
        mu_value = complex(-0.5 - k)
    if nu_value is None:
        nu_value = complex(-0.5, tau)
    pt = legendre.EvalPoint(mu=mu_value, nu=nu_value, rho=rho_value)
    if kind is EvalKind.P:
        value = legendre.p_general(pt)
    elif kind is EvalKind.Q:
        value = legendre.q_general(pt)
    else:
        shift = -0.5 - mu_value
        if abs(shift.imag) > 0.0:
            raise DomainError(f"{kind.value} needs a real order shift K: mu = {mu_value}")
        if kind is EvalKind.Q_WHIPPLE:
            value = legendre.q_via_whipple(shift.real, nu_value, rho_value)
        else:
            value = legendre.q_asymptotic(shift.real, nu_value, rho_value)
    _emit(
        records.eval_record(kind.value, mu_value, nu_value, rho_value, value),
        output_format,
    )


def _window(
    settings: config.Settings,
    re_min: float | None,
    re_max: float | None,
    im_min: float | None,
    im_max: float | None,
) -> polescan.Window:
    default = settings.nu_window()
    return polescan.Window(
        re_min=default.re_min if re_min is None else re_min,
        re_max=default.re_max if re_max is None else re_max,
        im_min=default.im_min if im_min is None else im_min,
        im_max=default.im_max if im_max is None else im_max,
    )


@app.command("polescan")
@_exit_codes
def polescan_(
    ctx: typer.Context,
    k: Annotated[float, typer.Option("--K", "--k", help="Order shift K.")],
    out: Annotated[
        pathlib.Path,
        typer.Option(help="Output prefix; writes <out>.csv, <out>.json and <out>.poles.jsonl."),
    ] = pathlib.Path("polescan"),
    re_min: Annotated[float | None, typer.Option(help="Window lower Re(nu).")] = None,
    re_max: Annotated[float | None, typer.Option(help="Window upper Re(nu).")] = None,
    im_min: Annotated[float | None, typer.Option(help="Window lower Im(nu).")] = None,
    im_max: Annotated[float | None, typer.Option(help="Window upper Im(nu).")] = None,
    nx: Annotated[int, typer.Option(help="Grid columns along Re(nu).")] = 141,
    ny: Annotated[int, typer.Option(help="Grid rows along Im(nu).")] = 40,
    rho: RhoOption = None,
    cosh_rho: CoshRhoOption = None,
    confirm: Annotated[
        bool, typer.Option(help="Add contour-integrated residue records.")
    ] = False,
    exact_integer: Annotated[
        bool | None,
        typer.Option(help="Treat K as an integer (or not) instead of detecting it."),
    ] = None,
    jobs: Annotated[int | None, typer.Option(help="Worker processes for the grid.")] = None,
):
    """
    Scan log10|Q| over a nu window and write the predicted poles.
    """
    settings = _settings(ctx).with_overrides(jobs=jobs)
    rho_value = _resolve_rho(settings, rho, cosh_rho)
    window = _window(settings, re_min, re_max, im_min, im_max)
    grid = polescan.scan_grid(k, window, nx, ny, rho_value, jobs=settings.jobs)
    prefix = settings.output_path(out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    grid_path = prefix.with_name(prefix.name + ".csv")
    records.write_grid_csv(grid_path, grid)
    if confirm:
        pole_records = []
        for confirmation in polescan.confirm_poles(
            k,
            window,
            rho_value,
            settings.contour_radius,
            settings.contour_samples,
            exact_integer,
        ):
            pole_records.extend((confirmation.predicted, confirmation.numeric))
    else:
        pole_records = polescan.predict_poles(k, window, rho_value, exact_integer)
    poles_path = prefix.with_name(prefix.name + ".poles.jsonl")
    count = records.write_pole_records(poles_path, pole_records)
    LOG.info("Scan written - grid:%s poles:%s records:%s", grid_path, poles_path, count)


@app.command("eptable")
@_exit_codes
def eptable(
    ctx: typer.Context,
    k_min: Annotated[float, typer.Option("--k-min", help="First K.")] = -2.0,
    k_max: Annotated[float, typer.Option("--k-max", help="Last K.")] = 2.0,
    step: Annotated[float, typer.Option(help="K increment.")] = 0.5,
    output_format: Annotated[
        OutputFormat, typer.Option("--format", help="table, json or csv.")
    ] = OutputFormat.TABLE,
):
    """
    Classify the pole pattern of Q for K from k-min to k-max.

    "count" is the exact number of poles, "leading" the number visible in
    the large-cosh(rho) form, "in_window" the surviving poles in the window.
    """
    if not step > 0.0 or k_max < k_min:
        raise UsageError(f"Need step > 0 and k-max >= k-min: {k_min} {k_max} {step}")
    window = _settings(ctx).nu_window()
    steps = int(math.floor((k_max - k_min) / step + 1e-9))
    rows = []
    for i in range(steps + 1):
        classification = polescan.classify_exceptional(round(k_min + i * step, 12), window)
        rows.append(
            {
                "K": classification.K,
                "kind": classification.kind.value,
                "count": classification.pole_count,
                "leading": classification.leading_order_count,
                "in_window": classification.pole_count_in_window,
            }
        )
    if output_format is OutputFormat.TABLE:
        typer.echo(f"{'K':>6} {'kind':<9} {'count':>6} {'leading':>8} {'in_window':>10}")
        for row in rows:
            count = "inf" if row["count"] is None else str(row["count"])
            leading = "inf" if row["leading"] is None else str(row["leading"])
            typer.echo(
                f"{row['K']:>6g} {row['kind']:<9} {count:>6} {leading:>8} {row['in_window']:>10}"
            )
    else:
        for i, row in enumerate(rows):
            _emit(row, output_format, header=i == 0)


@app.command("norm")
@_exit_codes
def norm(
    ctx: typer.Context,
    k: Annotated[
        float | None, typer.Option("--K", "--k", help="Order shift K (not needed for regularized).")
    ] = None,
    method: Annotated[NormMethod, typer.Option(help="Integration method.")] = NormMethod.QUADRATURE,
    rho: RhoOption = None,
    cosh_rho: CoshRhoOption = None,
    tol: Annotated[float | None, typer.Option(help="Absolute/relative tolerance.")] = None,
    epsilon: Annotated[float, typer.Option(help="K = 0 regulator.")] = 0.1,
    extended: Annotated[
        bool, typer.Option(help="Allow the residue series for noninteger K > 0.")
    ] = False,
):
    """
    Compute the normalization integral and print one JSON record per method.
    """
    settings = _settings(ctx)
    rho_value = _resolve_rho(settings, rho, cosh_rho)
    if method is not NormMethod.REGULARIZED and k is None:
        raise UsageError(f"--K is required for method {method.value}")
    if method in (NormMethod.QUADRATURE, NormMethod.ALL):
        result = norms.norm_quadrature(
            k, rho_value, tol or settings.quadrature_tol, settings.tail_switch
        )
        _emit(
            records.norm_record(
                k, rho_value, "quadrature", result.value, result.abs_error_estimate, result.evaluations
            ),
            OutputFormat.JSON,
        )
    if method in (NormMethod.SERIES, NormMethod.ALL):
        series = norms.norm_residue_series(
            k, rho_value, tol or norms.DEFAULT_TOLERANCE, extended=extended
        )
        _emit(
            records.norm_record(
                k, rho_value, "series", series.value, series.last_term_magnitude, series.terms_used
            ),
            OutputFormat.JSON,
        )
    if method is NormMethod.REGULARIZED:
        regularized = norms.norm_regularized_k0(rho_value, epsilon)
        _emit(
            records.norm_record(0.0, rho_value, "regularized-analytic", regularized.analytic, 0.0, 0),
            OutputFormat.JSON,
        )
        numeric = regularized.numeric
        _emit(
            records.norm_record(
                0.0, rho_value, "regularized", numeric.value, numeric.abs_error_estimate, numeric.evaluations
            ),
            OutputFormat.JSON,
        )


@app.command("collapse")
@_exit_codes
def collapse(
    ctx: typer.Context,
    eps: Annotated[
        list[float] | None, typer.Option("--eps", help="Regulators epsilon, K = -epsilon.")
    ] = None,
    rho: RhoOption = None,
    cosh_rho: CoshRhoOption = None,
    output_format: Annotated[
        OutputFormat, typer.Option("--format", help="table, json or csv.")
    ] = OutputFormat.TABLE,
):
    """
    Show the residue series collapsing onto its n = 0 pole as K -> 0-.
    """
    rho_value = _resolve_rho(_settings(ctx), rho, cosh_rho)
    rows = norms.collapse_demo(rho_value, eps or [1e-2, 1e-3, 1e-4])
    if output_format is OutputFormat.TABLE:
        typer.echo(f"{'epsilon':>10} {'n0_term':>14} {'tail_sum':>12} {'ratio':>12}")
        for row in rows:
            typer.echo(
                f"{row.epsilon:>10.3g} {row.n0_term:>14.8g} {row.tail_sum:>12.4g} {row.ratio:>12.8f}"
            )
        return
    for i, row in enumerate(rows):
        _emit(
            {
                "epsilon": row.epsilon,
                "n0_term": row.n0_term,
                "tail_sum": row.tail_sum,
                "ratio": row.ratio,
            },
            output_format,
            header=i == 0,
        )


@app.command("verify")
@_exit_codes
def verify_(
    ctx: typer.Context,
    filter: Annotated[
        str | None, typer.Option(help="Regex selecting checks by name.")
    ] = None,
    seed: Annotated[int | None, typer.Option(help="Sampler seed.")] = None,
    out: Annotated[
        pathlib.Path | None,
        typer.Option(help="Also write the JSON report array to this file."),
    ] = None,
    jobs: Annotated[int | None, typer.Option(help="Worker processes.")] = None,
):
    """
    Run the identity verification suite; exits 0 only when every check passes.

    Prints the JSON report array, then the summary table.
    """
    settings = _settings(ctx).with_overrides(seed=seed, jobs=jobs)
    reports = verify.run_suite(filter, settings.seed, settings.jobs)
    report_array = (
        "[\n" + ",\n".join(records.dumps(r.to_dict()) for r in reports) + "\n]"
    )
    typer.echo(report_array)
    typer.echo(verify.summary_table(reports))
    if out is not None:
        path = settings.output_path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report_array + "\n", encoding="utf-8")
        LOG.info("Report written - path:%s", path)
    failed = [r.name for r in reports if not r.passed]
    if failed:
        LOG.warning("Checks failed - names:%s", failed)
        raise typer.Exit(EXIT_FAILED)


def main():
    config.init()
    try:
        app()
    except LegendreError as exc:
        LOG.error("%s", exc)
        sys.exit(EXIT_DOMAIN)


if __name__ == "__main__":
    main()
