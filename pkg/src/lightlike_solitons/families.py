"""
Graphical translating solitons x = u(y, z) on the light-like direction (1, 0, 0).

Every solution is a translation surface u = a(y) + b(z) of one of four types,
with w = (z - z0) / (2 lambda):

- TYPE_I:   u = -2 lambda^2 y + 4 lambda^2 ln cosh w + a0        (entire, space-like)
- TYPE_II:  u = a1 e^(-2y) - (b1^2 / 2) y + b1 z + b0, a1 != 0   (entire, sign of a1)
- TYPE_III: u = 2 lambda^2 y - 4 lambda^2 ln|cos w| + b0         (strip k, time-like)
- TYPE_IV:  u = -2 lambda^2 y + 4 lambda^2 ln|sinh w| + a0       (half-plane, time-like)

All of them satisfy u_yy + 2 u_z u_yz - 2 u_y u_zz + 2 u_y + u_z^2 = 0 and are flat.
"""

from dataclasses import dataclass, field
from enum import Enum
import logging
import math
from typing import Callable, Dict, NamedTuple, Optional

from lightlike_solitons.errors import InvalidParamError, OutOfDomainError
from lightlike_solitons.minkowski import CausalCharacter
from lightlike_solitons.surface_geometry import DomainSpec, SurfacePatch, graph_patch

logger = logging.getLogger(__name__)

DOMAIN_MARGIN = 1e-8


class FamilyKind(str, Enum):
    TYPE_I = "type_i"
    TYPE_II = "type_ii"
    TYPE_III = "type_iii"
    TYPE_IV = "type_iv"

    @property
    def label(self) -> str:
        return {"type_i": "I", "type_ii": "II", "type_iii": "III", "type_iv": "IV"}[self.value]


class Half(str, Enum):
    PLUS = "plus"
    MINUS = "minus"


class GraphPartials(NamedTuple):
    u_y: float
    u_z: float
    u_yy: float
    u_yz: float
    u_zz: float


def _log_cosh(w: float) -> float:
    a = abs(w)
    return a + math.log1p(math.exp(-2 * a)) - math.log(2.0)


def _sech(w: float) -> float:
    a = abs(w)
    e = math.exp(-a)
    return 2 * e / (1 + e * e)


def _log_abs_sinh(w: float) -> float:
    a = abs(w)
    return a + math.log(-math.expm1(-2 * a)) - math.log(2.0)


def _csch_squared(w: float) -> float:
    a = abs(w)
    return 4 * math.exp(-2 * a) / math.expm1(-2 * a) ** 2


# ===== per-type closed forms =====
# Each value function takes (family, y, z) and is only called on domain points.


def _type_i_u(fam: "GraphSolitonFamily", y: float, z: float) -> float:
    lam = fam.lam
    return -2 * lam**2 * y + 4 * lam**2 * _log_cosh(fam.w(z)) + fam.a0


def _type_i_partials(fam: "GraphSolitonFamily", y: float, z: float) -> GraphPartials:
    lam, w = fam.lam, fam.w(z)
    return GraphPartials(-2 * lam**2, 2 * lam * math.tanh(w), 0.0, 0.0, _sech(w) ** 2)


def _type_ii_u(fam: "GraphSolitonFamily", y: float, z: float) -> float:
    return fam.a1 * math.exp(-2 * y) - 0.5 * fam.b1**2 * y + fam.b1 * z + fam.b0


def _type_ii_partials(fam: "GraphSolitonFamily", y: float, z: float) -> GraphPartials:
    ey = fam.a1 * math.exp(-2 * y)
    return GraphPartials(-2 * ey - 0.5 * fam.b1**2, fam.b1, 4 * ey, 0.0, 0.0)


def _type_iii_u(fam: "GraphSolitonFamily", y: float, z: float) -> float:
    lam = fam.lam
    return 2 * lam**2 * y - 4 * lam**2 * math.log(abs(math.cos(fam.w(z)))) + fam.b0


def _type_iii_partials(fam: "GraphSolitonFamily", y: float, z: float) -> GraphPartials:
    lam = fam.lam
    t = math.tan(fam.w(z))
    return GraphPartials(2 * lam**2, 2 * lam * t, 0.0, 0.0, 1.0 + t * t)  # sec^2 = 1 + tan^2


def _type_iv_u(fam: "GraphSolitonFamily", y: float, z: float) -> float:
    lam = fam.lam
    return -2 * lam**2 * y + 4 * lam**2 * _log_abs_sinh(fam.w(z)) + fam.a0


def _type_iv_partials(fam: "GraphSolitonFamily", y: float, z: float) -> GraphPartials:
    lam = fam.lam
    w = fam.w(z)
    return GraphPartials(-2 * lam**2, 2 * lam / math.tanh(w), 0.0, 0.0, -_csch_squared(w))


_VALUES: Dict[FamilyKind, Callable] = {
    FamilyKind.TYPE_I: _type_i_u,
    FamilyKind.TYPE_II: _type_ii_u,
    FamilyKind.TYPE_III: _type_iii_u,
    FamilyKind.TYPE_IV: _type_iv_u,
}

_PARTIALS: Dict[FamilyKind, Callable] = {
    FamilyKind.TYPE_I: _type_i_partials,
    FamilyKind.TYPE_II: _type_ii_partials,
    FamilyKind.TYPE_III: _type_iii_partials,
    FamilyKind.TYPE_IV: _type_iv_partials,
}


@dataclass(frozen=True)
class GraphSolitonFamily:
    """
    One member of the four graph families.

    Parameters are validated at construction; evaluation at a point outside
    the natural domain (or closer than ``margin`` to its boundary) raises
    OutOfDomainError before any tan/coth pole is hit.

    Attributes:
        kind: family type
        lam: lambda > 0 (Types I, III, IV)
        z0: centre of the z-profile (Types I, III, IV)
        a0, b0: additive constants
        a1: e^(-2y) coefficient (Type II, != 0)
        b1: slope in z (Type II)
        k: strip index (Type III)
        half: half-plane z > z0 (PLUS) or z < z0 (MINUS) (Type IV)
        margin: boundary exclusion distance in z units
    """

    kind: FamilyKind
    lam: float = 1.0
    z0: float = 0.0
    a0: float = 0.0
    a1: float = 1.0
    b0: float = 0.0
    b1: float = 1.0
    k: int = 0
    half: Half = Half.PLUS
    margin: float = DOMAIN_MARGIN
    domain: DomainSpec = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        object.__setattr__(self, "half", Half(self.half))
        for name in ("lam", "z0", "a0", "a1", "b0", "b1", "margin"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParamError(f"{name} must be finite")
        if self.kind is FamilyKind.TYPE_II:
            if self.a1 == 0:
                raise InvalidParamError("Type II requires a1 != 0")
        elif not self.lam > 0:
            raise InvalidParamError(f"Type {self.kind.label} requires lambda > 0")
        if self.margin < 0:
            raise InvalidParamError("margin must be >= 0")
        object.__setattr__(self, "domain", self._natural_domain())

    # ===== domain =====

    def _natural_domain(self) -> DomainSpec:
        if self.kind is FamilyKind.TYPE_III:
            lo, hi = self.strip_bounds()
            return DomainSpec.horizontal_strip(lo, hi)
        if self.kind is FamilyKind.TYPE_IV:
            return DomainSpec.half_plane(self.z0, upper=self.half is Half.PLUS)
        return DomainSpec.full_plane()

    def strip_bounds(self):
        """z-interval of the strip -pi/2 + k pi < w < pi/2 + k pi."""
        c = 2 * self.lam
        return self.z0 + c * (self.k * math.pi - math.pi / 2), self.z0 + c * (self.k * math.pi + math.pi / 2)

    @property
    def is_entire(self) -> bool:
        return self.kind in (FamilyKind.TYPE_I, FamilyKind.TYPE_II)

    def w(self, z: float) -> float:
        return (z - self.z0) / (2 * self.lam)

    def contains(self, y: float, z: float, margin: Optional[float] = None) -> bool:
        return self.domain.contains(y, z, self.margin if margin is None else margin)

    def _require(self, y: float, z: float, margin: Optional[float] = None):
        if not self.contains(y, z, margin):
            raise OutOfDomainError(
                f"({y}, {z}) outside the {self.domain.kind.value} domain of Type {self.kind.label}"
            )

    # ===== evaluation =====

    def eval_u(self, y: float, z: float) -> float:
        self._require(y, z)
        return _VALUES[self.kind](self, y, z)

    def partials_u(self, y: float, z: float, margin: Optional[float] = None) -> GraphPartials:
        """
        (u_y, u_z, u_yy, u_yz, u_zz) in closed form; u_yz is identically 0.

        ``margin`` overrides the family's boundary margin (the geodesic
        integrator evaluates up to the boundary itself).
        """
        self._require(y, z, margin)
        return _PARTIALS[self.kind](self, y, z)

    def pde_residual(self, y: float, z: float) -> float:
        """Left-hand side of u_yy + 2 u_z u_yz - 2 u_y u_zz + 2 u_y + u_z^2 = 0."""
        d = self.partials_u(y, z)
        return d.u_yy + 2 * d.u_z * d.u_yz - 2 * d.u_y * d.u_zz + 2 * d.u_y + d.u_z**2

    def pde_scale(self, y: float, z: float) -> float:
        """Largest term of the PDE at (y, z); residuals are compared relative to it."""
        d = self.partials_u(y, z)
        return max(1.0, abs(d.u_yy), abs(2 * d.u_z * d.u_yz), abs(2 * d.u_y * d.u_zz), abs(2 * d.u_y), d.u_z**2)

    def causal_character(self) -> CausalCharacter:
        if self.kind is FamilyKind.TYPE_I:
            return CausalCharacter.SPACELIKE
        if self.kind is FamilyKind.TYPE_II:
            return CausalCharacter.SPACELIKE if self.a1 > 0 else CausalCharacter.TIMELIKE
        return CausalCharacter.TIMELIKE

    def patch(self) -> SurfacePatch:
        """Analytic graph patch psi(y, z) = (u(y, z), y, z) on the margin-shrunk domain."""
        return graph_patch(self.eval_u, self.partials_u, self.domain, name=f"type_{self.kind.label}")

    def metric(self):
        """Induced metric I = -2 u_y dy^2 - 2 u_z dy dz + dz^2 with analytic partials."""
        from lightlike_solitons.geodesics import InducedMetric

        return InducedMetric.from_graph_family(self)

    def params(self) -> dict:
        """Parameters that matter for this kind, keyed as in JSON descriptors."""
        if self.kind is FamilyKind.TYPE_II:
            return {"a1": self.a1, "b0": self.b0, "b1": self.b1}
        out = {"lambda": self.lam, "z0": self.z0}
        if self.kind is FamilyKind.TYPE_III:
            out.update(b0=self.b0, k=self.k)
        else:
            out["a0"] = self.a0
        if self.kind is FamilyKind.TYPE_IV:
            out["half"] = self.half.value
        return out


def grim_reaper(normalization: str = "theorem") -> GraphSolitonFamily:
    """
    Light-like Grim Reaper cylinder, a Type II graph with b1 = b0 = 0.

    Args:
        normalization: "theorem" gives a1 = 2 (u = 2 e^(-2y)); "curve" gives
            a1 = 1/2, the profile x = e^(-2y) / 2

    Returns:
        Type II family
    """
    a1 = {"theorem": 2.0, "curve": 0.5}.get(normalization)
    if a1 is None:
        raise InvalidParamError(f"unknown Grim Reaper normalization {normalization!r}")
    return GraphSolitonFamily(FamilyKind.TYPE_II, a1=a1, b0=0.0, b1=0.0)
