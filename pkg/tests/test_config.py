import pathlib

import pytest

from legendre_ep import config
from legendre_ep.polescan import Window


def test_defaults(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(config.OUTPUT_DIR_ENV_NAME, raising=False)
    settings = config.load()
    assert settings == config.Settings()
    assert settings.nu_window() == Window()


def test_discovers_config_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(config.OUTPUT_DIR_ENV_NAME, raising=False)
    (tmp_path / config.CONFIG_FILE_NAME).write_text(
        'cosh-rho = 5.0\ncontour-samples = 512\n\n[window]\nre-min = -3.0\n'
    )
    settings = config.load()
    assert settings.cosh_rho == 5.0
    assert settings.contour_samples == 512
    assert settings.window == (-3.0, 1.0, -1.0, 1.0)


def test_reads_pyproject_tool_table(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "pyproject.toml").write_text(
        '[project]\nname = "x"\n\n[tool.legendre-ep]\nseed = 42\nwindow = [-2.0, 0.0, -0.5, 0.5]\n'
    )
    settings = config.load()
    assert settings.seed == 42
    assert settings.nu_window() == Window(-2.0, 0.0, -0.5, 0.5)


def test_pyproject_without_table_is_ignored(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "pyproject.toml").write_text('[project]\nname = "x"\n')
    assert config.load().seed == 0


def test_environment_overrides_output_dir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv(config.OUTPUT_DIR_ENV_NAME, str(tmp_path / "out"))
    settings = config.load()
    assert settings.output_path("scan.csv") == tmp_path / "out" / "scan.csv"
    assert settings.output_path(pathlib.Path("/abs/x.csv")) == pathlib.Path("/abs/x.csv")


def test_missing_explicit_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        config.load(tmp_path / "missing.toml")


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text("colour = 'red'\n")
    with pytest.raises(ValueError):
        config.load(path)


def test_cosh_rho_must_exceed_one():
    with pytest.raises(ValueError):
        config.Settings.from_dict({"cosh_rho": 1.0})


def test_overrides_skip_none():
    settings = config.Settings()
    assert settings.with_overrides(seed=None) is settings
    assert settings.with_overrides(jobs=4, seed=None).jobs == 4
