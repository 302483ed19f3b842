"""
JSON descriptors of soliton families.

A descriptor is {"kind": ..., "params": {...}} with kind one of type_i,
type_ii, type_iii, type_iv, parabolic_1, parabolic_2. Omitted parameters take
the values of ``family_defaults`` / ``parabolic_defaults`` in the settings.
"""

import json
import logging
from typing import Dict, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from lightlike_solitons.errors import DescriptorError
from lightlike_solitons.families import FamilyKind, GraphSolitonFamily
from lightlike_solitons.parabolic import ParabolicProfile, ProfileCase
from lightlike_solitons.settings import Settings, get_settings

logger = logging.getLogger(__name__)

Family = Union[GraphSolitonFamily, ParabolicProfile]

_GRAPH_PARAMS = {"lambda", "z0", "a0", "a1", "b0", "b1", "k", "half", "margin"}
_PARABOLIC_PARAMS = {
    "parabolic_1": {"a0", "a1", "s_min", "s_max", "margin"},
    "parabolic_2": {"b0", "b1", "s_min", "s_max", "margin"},
}


class FamilyDescriptor(BaseModel):
    """Exchange format of a family on the command line and in reports."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["type_i", "type_ii", "type_iii", "type_iv", "parabolic_1", "parabolic_2"]
    params: Dict[str, Union[float, int, str]] = Field(default_factory=dict)


def parse_descriptor(data: Union[str, dict]) -> FamilyDescriptor:
    """
    Validate a descriptor given as JSON text or as a mapping.

    Raises:
        DescriptorError: malformed JSON, unknown kind or unknown parameter names
    """
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise DescriptorError(f"family descriptor is not valid JSON: {e}") from e
    try:
        desc = FamilyDescriptor.model_validate(data)
    except ValidationError as e:
        raise DescriptorError(f"invalid family descriptor: {e.errors()[0]['msg']}") from e

    allowed = _PARABOLIC_PARAMS.get(desc.kind, _GRAPH_PARAMS)
    unknown = sorted(set(desc.params) - allowed)
    if unknown:
        raise DescriptorError(f"unknown parameter(s) for {desc.kind}: {', '.join(unknown)}")
    return desc


def _number(params: dict, name: str) -> float:
    try:
        return float(params[name])
    except (TypeError, ValueError) as e:
        raise DescriptorError(f"parameter {name} must be a number, got {params[name]!r}") from e


def build_family(desc: FamilyDescriptor, settings: Optional[Settings] = None) -> Family:
    """
    Instantiate the family; parameter hypotheses are checked by the constructors.

    A descriptor without "margin" gets ``tolerances.domain_margin``; parabolic
    profiles also take the phi^-1 accuracy from ``tolerances``.
    """
    settings = settings or get_settings()
    tol = settings.tolerances

    if desc.kind in _PARABOLIC_PARAMS:
        params = {**settings.parabolic_defaults.get(desc.kind, {}), **desc.params}
        missing = sorted({"s_min", "s_max"} - set(params))
        if missing:
            raise DescriptorError(f"{desc.kind} needs {', '.join(missing)}")
        params.setdefault("margin", tol.domain_margin)
        kwargs = {name: _number(params, name) for name in params}
        return ParabolicProfile(
            ProfileCase(desc.kind), phi_tol=tol.phi_inverse, phi_max_iter=tol.phi_inverse_max_iter, **kwargs
        )

    params = {**settings.family_defaults.model_dump(by_alias=True), **desc.params}
    k = params["k"]
    if isinstance(k, str) or float(k) != int(float(k)):
        raise DescriptorError(f"strip index k must be an integer, got {k!r}")
    half = str(params["half"]).lower()
    if half not in ("plus", "minus"):
        raise DescriptorError(f"half must be 'plus' or 'minus', got {params['half']!r}")

    margin = _number(params, "margin") if "margin" in params else tol.domain_margin
    return GraphSolitonFamily(
        FamilyKind(desc.kind),
        lam=_number(params, "lambda"),
        z0=_number(params, "z0"),
        a0=_number(params, "a0"),
        a1=_number(params, "a1"),
        b0=_number(params, "b0"),
        b1=_number(params, "b1"),
        k=int(float(k)),
        half=half,
        margin=margin,
    )


def load_family(data: Union[str, dict], settings: Optional[Settings] = None) -> Family:
    return build_family(parse_descriptor(data), settings)


def describe(family: Family) -> FamilyDescriptor:
    """Descriptor carrying every parameter relevant to ``family``."""
    if isinstance(family, ParabolicProfile):
        if family.case is ProfileCase.EXPLICIT_X_OF_S:
            params = {"a0": family.a0, "a1": family.a1}
        else:
            params = {"b0": family.b0, "b1": family.b1}
        params.update(s_min=family.s_min, s_max=family.s_max)
        return FamilyDescriptor(kind=family.case.value, params=params)
    return FamilyDescriptor(kind=family.kind.value, params=family.params())
