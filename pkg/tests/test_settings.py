import pytest

from lightlike_solitons.errors import InvalidParamError
from lightlike_solitons.settings import get_settings, load_settings, load_stated_table


def test_packaged_defaults(settings):
    assert settings.integrator.method == "DOP853"
    assert settings.probe.deltas == [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
    assert settings.family_defaults.lam == 1.0
    assert settings.parabolic_defaults["parabolic_2"]["s_max"] == 0.5


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("LIGHTLIKE_SEED", "11")
    monkeypatch.setenv("LIGHTLIKE_LOG_LEVEL", "debug")
    settings = load_settings()
    assert settings.probe.seed == 11
    assert settings.log_level == "DEBUG"


def test_alternative_config_file(tmp_path, monkeypatch):
    path = tmp_path / "settings.yaml"
    path.write_text("probe:\n  n_random: 3\n", encoding="utf-8")
    monkeypatch.setenv("LIGHTLIKE_CONFIG", str(path))
    settings = get_settings()
    assert settings.probe.n_random == 3
    assert settings.probe.horizon == 1e3
    assert get_settings() is settings


def test_missing_config_file(tmp_path):
    with pytest.raises(InvalidParamError):
        load_settings(tmp_path / "missing.yaml")


@pytest.mark.parametrize("body", ["probe:\n  n_random: -1\n", "integrator:\n  rtol: 0\n", "- just\n- a list\n"])
def test_invalid_config(tmp_path, body):
    path = tmp_path / "bad.yaml"
    path.write_text(body, encoding="utf-8")
    with pytest.raises(InvalidParamError):
        load_settings(path)


def test_stated_table():
    rows = load_stated_table()
    assert [r["type"] for r in rows] == ["I", "II", "II", "III", "IV"]
    assert rows[0]["complete"] is True
    assert {r.get("condition") for r in rows if r["type"] == "II"} == {"a1 > 0", "a1 < 0"}
