import math

import numpy as np
import pytest

from legendre_ep import polescan, records
from legendre_ep.polescan import PoleRecord, PoleSource, ScanGrid, Window


def test_dumps_canonical_floats():
    text = records.dumps({"b": 0.1, "a": 1, "c": "x", "d": None, "e": math.nan, "f": -0.0})
    assert text == '{"b": 0.10000000000000001, "a": 1, "c": "x", "d": null, "e": null, "f": -0}'


def test_loads_keeps_negative_zero():
    data = records.loads('{"f": -0, "g": 3}')
    assert math.copysign(1.0, data["f"]) == -1.0
    assert data["g"] == 3


def test_dumps_loads_dumps_is_stable():
    text = records.dumps(records.eval_record("Q", -0.5, complex(-0.5, 1.0), 1.3, 1 / 3 - 2j / 7))
    assert records.dumps(records.loads(text)) == text


def test_pole_record_fields():
    record = PoleRecord(
        nu_location=complex(-0.5),
        residue=-0.9523128068j,
        source=PoleSource.PREDICTED,
        K=0.0,
        rho_used=1.3,
    )
    data = records.pole_record_to_dict(record)
    assert tuple(data) == records.POLE_FIELDS
    assert data["source"] == "predicted"
    assert records.pole_record_from_dict(data, 1.3) == record


def test_pole_record_missing_field():
    with pytest.raises(ValueError):
        records.pole_record_from_dict({"k": 0.0}, 1.0)


def test_pole_records_jsonl(tmp_path):
    path = tmp_path / "poles.jsonl"
    predicted = polescan.predict_poles(1.0)
    assert records.write_pole_records(path, predicted) == 3
    lines = path.read_text().splitlines()
    assert len(lines) == 3
    assert records.read_pole_records(path, polescan.DEFAULT_RHO) == predicted


def test_norm_record_fields():
    record = records.norm_record(-0.25, 1.3, "series", 2.5, 1e-12, 57)
    assert tuple(record) == records.NORM_FIELDS
    assert record["terms_or_evals"] == 57


def test_csv_row():
    header, cells = records.csv_row({"kind": "P", "re": 0.5, "n": 2})
    assert header == ["kind", "re", "n"]
    assert cells == ["P", "0.5", "2"]


def test_grid_csv_with_sidecar(tmp_path):
    window = Window(-1.0, 0.0, -0.5, 0.5)
    values = np.array([[0.5, math.nan, 1.25], [2.0, -3.0, 4.5]])
    grid = ScanGrid(
        K=0.3,
        rho=1.3,
        window=window,
        re_values=np.linspace(-1.0, 0.0, 3),
        im_values=np.linspace(-0.5, 0.5, 2),
        values=values,
        failures=[(0, 1, "PoleError: pole at -0.5")],
    )
    path = tmp_path / "scan.csv"
    sidecar = records.write_grid_csv(path, grid)
    assert sidecar == tmp_path / "scan.json"
    header = path.read_text().splitlines()[0]
    assert header == "re_nu,-1,-0.5,0"
    meta = records.loads(sidecar.read_text())
    assert meta["nx"] == 3 and meta["ny"] == 2 and meta["failures"] == 1
    assert meta["window"] == {"re_min": -1.0, "re_max": 0.0, "im_min": -0.5, "im_max": 0.5}
    restored = records.read_grid_csv(path)
    assert restored.window == window
    assert restored.K == 0.3
    np.testing.assert_array_equal(restored.values, values)


def test_read_grid_rejects_other_csv(tmp_path):
    path = tmp_path / "other.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        records.read_grid_csv(path)
