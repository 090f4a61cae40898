"""
Machine-readable output formats.

- Canonical JSON records: fixed field order, floats with 17 significant
  digits, NaN/inf as null. A record read back with loads() and written
  again with dumps() reproduces the same text.
- PoleRecord JSON-lines: {"k", "nu_re", "nu_im", "res_re", "res_im", "source"}
- Normalization records: {"K", "rho", "method", "value", "error_estimate", "terms_or_evals"}
- ScanGrid CSV: header "re_nu" followed by the grid's real parts, then one row
  per imaginary part led by that im_nu value; a JSON sidecar carries the
  window, shape and run metadata.
"""

from __future__ import annotations

import csv
import datetime
import json
import logging
import math
import pathlib
from importlib import metadata
from typing import Any, Iterable

import numpy as np

from legendre_ep.polescan import PoleRecord, PoleSource, ScanGrid, Window

LOG = logging.getLogger(__name__)

PACKAGE_NAME = "legendre-ep"
POLE_FIELDS = ("k", "nu_re", "nu_im", "res_re", "res_im", "source")
NORM_FIELDS = ("K", "rho", "method", "value", "error_estimate", "terms_or_evals")


def _format_value(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return "null"
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    raise TypeError(f"Unsupported record value: {value!r}")


def dumps(record: dict[str, Any]) -> str:
    """Canonical single-line JSON; fields keep their insertion order."""
    return "{" + ", ".join(f"{json.dumps(k)}: {_format_value(v)}" for k, v in record.items()) + "}"


def _parse_int(text: str) -> int | float:
    # "-0" is a float that lost its fraction in .17g form
    return -0.0 if text == "-0" else int(text)


def loads(text: str) -> dict[str, Any]:
    return json.loads(text, parse_int=_parse_int)


def version() -> str:
    try:
        return metadata.version(PACKAGE_NAME)
    except metadata.PackageNotFoundError:
        return "0.0.0"


def pole_record_to_dict(record: PoleRecord) -> dict[str, Any]:
    return {
        "k": float(record.K),
        "nu_re": record.nu_location.real,
        "nu_im": record.nu_location.imag,
        "res_re": record.residue.real,
        "res_im": record.residue.imag,
        "source": record.source.value,
    }


def pole_record_from_dict(data: dict[str, Any], rho: float) -> PoleRecord:
    missing = [name for name in POLE_FIELDS if name not in data]
    if missing:
        raise ValueError(f"Pole record missing fields: {missing}")
    return PoleRecord(
        nu_location=complex(data["nu_re"], data["nu_im"]),
        residue=complex(data["res_re"], data["res_im"]),
        source=PoleSource(data["source"]),
        K=float(data["k"]),
        rho_used=rho,
    )


def write_pole_records(path: pathlib.Path, records: Iterable[PoleRecord]) -> int:
    """Write one canonical JSON line per record; returns the count written."""
    count = 0
    with path.open("w", encoding="utf-8") as f:
        for record in records:
            f.write(dumps(pole_record_to_dict(record)) + "\n")
            count += 1
    LOG.debug("Pole records written - path:%s count:%s", path, count)
    return count


def read_pole_records(path: pathlib.Path, rho: float) -> list[PoleRecord]:
    with path.open(encoding="utf-8") as f:
        return [pole_record_from_dict(loads(line), rho) for line in f if line.strip()]


def norm_record(
    K: float,
    rho: float,
    method: str,
    value: float,
    error_estimate: float,
    terms_or_evals: int,
) -> dict[str, Any]:
    return {
        "K": float(K),
        "rho": float(rho),
        "method": method,
        "value": float(value),
        "error_estimate": float(error_estimate),
        "terms_or_evals": int(terms_or_evals),
    }


def eval_record(kind: str, mu: complex, nu: complex, rho: float, value: complex) -> dict[str, Any]:
    mu = complex(mu)
    nu = complex(nu)
    value = complex(value)
    return {
        "kind": kind,
        "mu_re": mu.real,
        "mu_im": mu.imag,
        "nu_re": nu.real,
        "nu_im": nu.imag,
        "rho": float(rho),
        "re": value.real,
        "im": value.imag,
    }


def csv_row(record: dict[str, Any]) -> tuple[list[str], list[str]]:
    """Header and value cells of a flat record, values in canonical text form."""
    return list(record.keys()), [
        v if isinstance(v, str) else _format_value(v) for v in record.values()
    ]


def _grid_metadata(grid: ScanGrid) -> dict[str, Any]:
    window = grid.window
    return {
        "window": {
            "re_min": float(window.re_min),
            "re_max": float(window.re_max),
            "im_min": float(window.im_min),
            "im_max": float(window.im_max),
        },
        "nx": len(grid.re_values),
        "ny": len(grid.im_values),
        "K": float(grid.K),
        "rho": float(grid.rho),
        "failures": len(grid.failures),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "version": version(),
    }


def write_grid_csv(path: pathlib.Path, grid: ScanGrid) -> pathlib.Path:
    """
    Write the grid CSV and its metadata sidecar (same stem, .json suffix).

    Returns the sidecar path.
    """
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["re_nu", *(format(float(x), ".17g") for x in grid.re_values)])
        for im, row in zip(grid.im_values, grid.values):
            writer.writerow(
                [format(float(im), ".17g"), *(format(float(v), ".17g") for v in row)]
            )
    sidecar = path.with_suffix(".json")
    sidecar.write_text(dumps(_grid_metadata(grid)) + "\n", encoding="utf-8")
    LOG.debug("Grid written - path:%s sidecar:%s", path, sidecar)
    return sidecar


def read_grid_csv(path: pathlib.Path) -> ScanGrid:
    """Read a grid CSV, with its sidecar when present."""
    with path.open(encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    if not rows or rows[0][0] != "re_nu":
        raise ValueError(f"Not a grid CSV: {path}")
    re_values = np.array([float(x) for x in rows[0][1:]])
    im_values = np.array([float(row[0]) for row in rows[1:]])
    values = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
    if values.shape != (len(im_values), len(re_values)):
        raise ValueError(f"Grid CSV is ragged: {path}")
    sidecar = path.with_suffix(".json")
    meta = loads(sidecar.read_text(encoding="utf-8")) if sidecar.exists() else {}
    window = (
        Window(**meta["window"])
        if "window" in meta
        else Window(
            float(re_values[0]), float(re_values[-1]), float(im_values[0]), float(im_values[-1])
        )
    )
    return ScanGrid(
        K=float(meta.get("K", math.nan)),
        rho=float(meta.get("rho", math.nan)),
        window=window,
        re_values=re_values,
        im_values=im_values,
        values=values,
    )
