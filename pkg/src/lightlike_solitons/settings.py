"""
Settings loader for lightlike_solitons.

Numerical defaults ship as the packaged YAML file ``config/defaults.yaml``.
At load time:
1. ``.env`` is read with python-dotenv (nothing in it is required)
2. the YAML file is parsed (``LIGHTLIKE_CONFIG`` may point at another one)
3. individual environment variables override single values
4. everything is validated into pydantic models

Recognised environment variables:
- LIGHTLIKE_CONFIG: path to an alternative defaults file
- LIGHTLIKE_LOG_LEVEL: logging level name for the command line
- LIGHTLIKE_SEED: seed of the random geodesic batches
"""

import os
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Union

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from lightlike_solitons.errors import InvalidParamError

CONFIG_DIR = Path(__file__).parent / "config"
DEFAULTS_FILE = CONFIG_DIR / "defaults.yaml"
TABLE_FILE = CONFIG_DIR / "table.yaml"


class Tolerances(BaseModel):
    causal: float = Field(1e-10, ge=0)
    degeneracy: float = Field(1e-12, gt=0)
    domain_margin: float = Field(1e-8, ge=0)
    fd_step: float = Field(1e-4, gt=0)
    phi_inverse: float = Field(1e-12, gt=0)
    phi_inverse_max_iter: int = Field(200, ge=1)


class IntegratorSettings(BaseModel):
    """Step control of the geodesic integrator."""

    method: str = "DOP853"
    rtol: float = Field(1e-10, gt=0)
    atol: float = Field(1e-10, gt=0)
    max_steps: int = Field(10_000_000, ge=1)
    boundary_margin: float = Field(1e-8, ge=0)
    blowup_speed: float = Field(1e6, gt=0)


class ProbeSettings(BaseModel):
    n_random: int = Field(20, ge=0)
    horizon: float = Field(1e3, gt=0)
    seed: int = 7
    y0: float = 0.0
    deltas: List[float] = Field(default_factory=lambda: [1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    quadrature_nodes: int = Field(2001, ge=5)


class VerificationSettings(BaseModel):
    """Sample sizes and pass tolerances of the verify suite."""

    grid_points: int = Field(21, ge=2)
    christoffel_points: int = Field(100, ge=1)
    pde_residual: float = Field(1e-12, gt=0)
    flatness: float = Field(1e-8, gt=0)
    mean_curvature: float = Field(1e-9, gt=0)
    normal: float = Field(1e-10, gt=0)
    christoffel: float = Field(1e-8, gt=0)
    finite_difference: float = Field(1e-6, gt=0)
    ode_residual: float = Field(1e-10, gt=0)
    sweep_residual: float = Field(1e-8, gt=0)
    invariance: float = Field(1e-12, gt=0)
    phi_round_trip: float = Field(1e-10, gt=0)
    first_integral: float = Field(1e-6, gt=0)
    witness_length: float = Field(1e-6, gt=0)


class FamilyDefaults(BaseModel):
    """Parameter values used when a graph family descriptor omits them."""

    model_config = ConfigDict(populate_by_name=True)

    lam: float = Field(1.0, alias="lambda")
    z0: float = 0.0
    a0: float = 0.0
    a1: float = 1.0
    b0: float = 0.0
    b1: float = 1.0
    k: int = 0
    half: str = "plus"


class Settings(BaseModel):
    log_level: str = "WARNING"
    tolerances: Tolerances = Field(default_factory=Tolerances)
    integrator: IntegratorSettings = Field(default_factory=IntegratorSettings)
    probe: ProbeSettings = Field(default_factory=ProbeSettings)
    verification: VerificationSettings = Field(default_factory=VerificationSettings)
    family_defaults: FamilyDefaults = Field(default_factory=FamilyDefaults)
    parabolic_defaults: Dict[str, Dict[str, float]] = Field(default_factory=dict)


def _read_yaml(path: Path) -> dict:
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise InvalidParamError(f"configuration file {path} must contain a mapping")
    return data


def load_settings(path: Optional[Union[str, Path]] = None) -> Settings:
    """
    Load and validate settings.

    Args:
        path: Explicit YAML file. Defaults to LIGHTLIKE_CONFIG, then the packaged file.

    Returns:
        Validated Settings instance

    Raises:
        InvalidParamError: If the file is missing or a value fails validation
    """
    load_dotenv()

    # ===== STEP 1: locate and parse the YAML file =====
    cfg_path = Path(path or os.getenv("LIGHTLIKE_CONFIG") or DEFAULTS_FILE)
    if not cfg_path.is_file():
        raise InvalidParamError(f"configuration file not found: {cfg_path}")
    data = _read_yaml(cfg_path)

    # ===== STEP 2: environment overrides =====
    if os.getenv("LIGHTLIKE_LOG_LEVEL"):
        data["log_level"] = os.environ["LIGHTLIKE_LOG_LEVEL"].upper()
    if os.getenv("LIGHTLIKE_SEED"):
        data.setdefault("probe", {})["seed"] = os.environ["LIGHTLIKE_SEED"]

    # ===== STEP 3: validate =====
    try:
        return Settings.model_validate(data)
    except ValidationError as e:
        raise InvalidParamError(f"invalid configuration in {cfg_path}: {e}") from e


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings, loaded once."""
    return load_settings()


def load_stated_table() -> List[dict]:
    """Stated rows of the causal-character/completeness table."""
    return list(_read_yaml(TABLE_FILE).get("rows", []))
