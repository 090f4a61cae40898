import functools
import logging
import os
import pathlib
import sys
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, Any, Callable, Mapping, TextIO

import tomlkit
from mergedeep import merge

if TYPE_CHECKING:
    from legendre_ep.polescan import Window

"""
Configuration and logging initialization for legendre-ep.

init() sets up logging; it is cached and loaded automatically by a site
customizer, though it can also be called manually. Run settings are layered:
built-in defaults, then a TOML file (legendre-ep.toml, or [tool.legendre-ep]
in pyproject.toml), then environment, then command-line overrides.
"""

LOG = logging.getLogger(__name__)
LOG_LEVEL_ENV_NAME = "LOG_LEVEL"
OUTPUT_DIR_ENV_NAME = "LEGENDRE_EP_OUTPUT_DIR"
CONFIG_FILE_NAME = "legendre-ep.toml"
PYPROJECT_FILE_NAME = "pyproject.toml"
TOOL_TABLE = "legendre-ep"
WINDOW_KEYS = ("re_min", "re_max", "im_min", "im_max")


@functools.cache
def init():
    """
    Initialize the logging configuration for the application.

    INFO records go to stdout as bare messages; every other level goes to
    stderr with timestamp, level and origin. The LOG_LEVEL environment
    variable sets the global level, defaulting to INFO.
    """
    date_format = "%Y-%m-%d %H:%M:%S"
    format_stdout = "%(message)s"
    format_stderr = (
        "%(asctime)s.%(msecs)03d | %(levelname)s | %(name)s:%(lineno)d - %(message)s"
    )
    log_level_env = os.getenv(LOG_LEVEL_ENV_NAME, "").upper()
    log_level = logging.getLevelNamesMapping().get(log_level_env, logging.INFO)

    def _create_handler(
        stream: TextIO,
        level: int,
        format: str,
        filter_fn: Callable[[logging.LogRecord], bool],
    ) -> logging.Handler:
        handler = logging.StreamHandler(stream)  # type: ignore[arg-type]
        handler.setLevel(level)
        handler.setFormatter(logging.Formatter(format, datefmt=date_format))
        handler.addFilter(filter_fn)
        return handler

    logging.basicConfig(
        level=log_level,
        handlers=[
            _create_handler(
                sys.stdout,
                logging.INFO,
                format_stdout,
                lambda record: record.levelno == logging.INFO,
            ),
            _create_handler(
                sys.stderr,
                logging.DEBUG,
                format_stderr,
                lambda record: record.levelno != logging.INFO,
            ),
        ],
    )


@dataclass(frozen=True)
class Settings:
    """
    Run configuration shared by the CLI commands.

    Attributes:
        cosh_rho: Default argument cosh(rho) when neither --rho nor --cosh-rho is given
        window: Default nu-plane window (re_min, re_max, im_min, im_max)
        contour_radius: Radius of the residue contour
        contour_samples: Trapezoid samples on the residue contour
        tail_switch: Initial tau where the analytic tail takes over
        quadrature_tol: Absolute tolerance of the normalization quadrature
        seed: Seed of the verification sampler
        jobs: Worker processes for grids and verification
        output_dir: Directory that relative output paths resolve against
    """

    cosh_rho: float = 2.0
    window: tuple[float, float, float, float] = (-6.0, 1.0, -1.0, 1.0)
    contour_radius: float = 1e-2
    contour_samples: int = 256
    tail_switch: float = 20.0
    quadrature_tol: float = 1e-10
    seed: int = 0
    jobs: int = 1
    output_dir: str = "."

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Settings":
        data = dict(data)
        unknown = sorted(set(data) - {f for f in cls.__dataclass_fields__})
        if unknown:
            raise ValueError(f"Unknown settings: {unknown}")
        if "window" in data:
            window = data["window"]
            if isinstance(window, Mapping):
                defaults = dict(zip(WINDOW_KEYS, cls.window))
                window = [window.get(k, defaults[k]) for k in WINDOW_KEYS]
            if len(window) != 4:
                raise ValueError(f"window needs four bounds: {window}")
            data["window"] = tuple(float(v) for v in window)
        if not data.get("cosh_rho", 2.0) > 1.0:
            raise ValueError(f"cosh_rho must be > 1: {data['cosh_rho']}")
        return cls(**data)

    def nu_window(self) -> "Window":
        from legendre_ep.polescan import Window

        return Window(*self.window)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def with_overrides(self, **overrides: Any) -> "Settings":
        """Copy with every non-None override applied."""
        given = {k: v for k, v in overrides.items() if v is not None}
        if not given:
            return self
        return Settings.from_dict(merge(self.to_dict(), given))

    def output_path(self, name: str | pathlib.Path) -> pathlib.Path:
        path = pathlib.Path(name)
        return path if path.is_absolute() else pathlib.Path(self.output_dir) / path


def _normalize_keys(table: Mapping[str, Any]) -> dict[str, Any]:
    return {
        key.replace("-", "_"): _normalize_keys(value) if isinstance(value, Mapping) else value
        for key, value in table.items()
    }


def _read_table(path: pathlib.Path) -> dict[str, Any]:
    LOG.debug("Reading: %s", path)
    with path.open("rb") as f:
        data = tomlkit.load(f).unwrap()
    if path.name == PYPROJECT_FILE_NAME:
        data = data.get("tool", {}).get(TOOL_TABLE, {})
    return _normalize_keys(data)


def _discover(directory: pathlib.Path) -> pathlib.Path | None:
    candidate = directory / CONFIG_FILE_NAME
    if candidate.is_file():
        return candidate
    pyproject = directory / PYPROJECT_FILE_NAME
    if pyproject.is_file():
        with pyproject.open("rb") as f:
            if TOOL_TABLE in tomlkit.load(f).get("tool", {}):
                return pyproject
    return None


def load(path: pathlib.Path | None = None) -> Settings:
    """
    Build Settings from defaults, a TOML file and the environment.

    Without an explicit path the working directory is searched for
    legendre-ep.toml, then for a pyproject.toml with a [tool.legendre-ep] table.
    """
    data = Settings().to_dict()
    if path is None:
        path = _discover(pathlib.Path.cwd())
    elif not path.is_file():
        raise FileNotFoundError(f"Config file not found: {path}")
    if path is not None:
        merge(data, _read_table(path))
    if output_dir := os.getenv(OUTPUT_DIR_ENV_NAME):
        merge(data, {"output_dir": output_dir})
    settings = Settings.from_dict(data)
    LOG.debug("Settings: %s", settings)
    return settings


@functools.cache
def settings() -> Settings:
    return load()
