import pytest

from lightlike_solitons.families import FamilyKind, GraphSolitonFamily, Half
from lightlike_solitons.settings import get_settings, load_settings


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("LIGHTLIKE_CONFIG", "LIGHTLIKE_LOG_LEVEL", "LIGHTLIKE_SEED"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def settings():
    return load_settings()


@pytest.fixture
def fast_settings(settings):
    """No random batch and a short horizon."""
    probe = settings.probe.model_copy(update={"n_random": 0, "horizon": 50.0})
    return settings.model_copy(update={"probe": probe})


@pytest.fixture
def type_i():
    return GraphSolitonFamily(FamilyKind.TYPE_I, lam=1.0, z0=0.0, a0=0.5)


@pytest.fixture
def type_ii():
    return GraphSolitonFamily(FamilyKind.TYPE_II, a1=1.0, b0=0.0, b1=0.5)


@pytest.fixture
def type_iii():
    return GraphSolitonFamily(FamilyKind.TYPE_III, lam=1.0, z0=0.0, b0=0.0, k=0)


@pytest.fixture
def type_iv():
    return GraphSolitonFamily(FamilyKind.TYPE_IV, lam=1.0, z0=0.0, a0=0.0, half=Half.PLUS)
