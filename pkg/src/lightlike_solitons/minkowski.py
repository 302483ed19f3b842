"""
Minkowski 3-space in light-cone coordinates.

Points and vectors are written in the basis {x, y, z} with <x, y> = -1,
x and y light-like and z a unit space-like vector, so the metric reads
-2 dx dy + dz^2. This module provides:
- LorentzVector: immutable 3-vector in that basis
- inner / norm_squared: the Lorentzian inner product
- causal_character: space-like / time-like / light-like / zero classification
- minkowski_cross: the Lorentzian cross product
- ParabolicIsometry: the one-parameter group xi_t fixing the light-like line of x
"""

from dataclasses import dataclass
from enum import Enum
import math
from typing import Union

import numpy as np

from lightlike_solitons.errors import InvalidParamError

# Gram matrix of the basis; it is its own inverse.
METRIC = np.array([[0.0, -1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])

DEFAULT_CAUSAL_TOL = 1e-10


class CausalCharacter(str, Enum):
    SPACELIKE = "space-like"
    TIMELIKE = "time-like"
    LIGHTLIKE = "light-like"
    ZERO = "zero"


@dataclass(frozen=True)
class LorentzVector:
    """
    A point or vector of L^3 in light-cone coordinates.

    Attributes:
        x: first light-like coordinate
        y: second light-like coordinate
        z: space-like coordinate
    """

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise InvalidParamError(f"non-finite vector component in {(self.x, self.y, self.z)}")

    @classmethod
    def from_array(cls, arr) -> "LorentzVector":
        a = np.asarray(arr, dtype=float).reshape(3)
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __add__(self, other: "LorentzVector") -> "LorentzVector":
        return LorentzVector(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "LorentzVector") -> "LorentzVector":
        return LorentzVector(self.x - other.x, self.y - other.y, self.z - other.z)

    def __mul__(self, s: float) -> "LorentzVector":
        return LorentzVector(s * self.x, s * self.y, s * self.z)

    __rmul__ = __mul__

    def __neg__(self) -> "LorentzVector":
        return LorentzVector(-self.x, -self.y, -self.z)


# Direction of the soliton translation, K = x.
LIGHTLIKE_DIRECTION = LorentzVector(1.0, 0.0, 0.0)

VectorLike = Union[LorentzVector, np.ndarray, tuple, list]


def as_array(v: VectorLike) -> np.ndarray:
    if isinstance(v, LorentzVector):
        return v.as_array()
    return np.asarray(v, dtype=float)


def inner(u: VectorLike, v: VectorLike) -> float:
    """Lorentzian inner product -(u_x v_y + u_y v_x) + u_z v_z."""
    a, b = as_array(u), as_array(v)
    return float(-(a[0] * b[1] + a[1] * b[0]) + a[2] * b[2])


def inner_many(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Row-wise inner product of two (..., 3) arrays."""
    return -(u[..., 0] * v[..., 1] + u[..., 1] * v[..., 0]) + u[..., 2] * v[..., 2]


def norm_squared(v: VectorLike) -> float:
    return inner(v, v)


def causal_character(v: VectorLike, tol: float = DEFAULT_CAUSAL_TOL) -> CausalCharacter:
    """
    Classify a vector by the sign of <v, v>.

    |<v, v>| <= tol * max(1, |v|_euclid^2) counts as light-like, or as zero
    when the vector itself vanishes to the same tolerance.

    Args:
        v: vector to classify
        tol: relative tolerance, >= 0

    Returns:
        CausalCharacter tag
    """
    if tol < 0:
        raise InvalidParamError("tol must be >= 0")
    a = as_array(v)
    euclid_sq = float(a @ a)
    q = inner(a, a)
    if abs(q) <= tol * max(1.0, euclid_sq):
        return CausalCharacter.ZERO if euclid_sq <= tol else CausalCharacter.LIGHTLIKE
    return CausalCharacter.SPACELIKE if q > 0 else CausalCharacter.TIMELIKE


def minkowski_cross(u: VectorLike, v: VectorLike) -> LorentzVector:
    """
    The unique w with <w, a> = det(u, v, a) for every a.

    The determinant covector is the Euclidean cross product; raising its index
    with METRIC (its own inverse) gives w.
    """
    return LorentzVector.from_array(cross_array(as_array(u), as_array(v)))


def cross_array(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return METRIC @ np.cross(u, v)


@dataclass(frozen=True)
class ParabolicIsometry:
    """
    Element xi_t of the parabolic group A_3.

    Points act as row vectors: xi_t . p = p @ matrix(t). The group is abelian
    with xi_a xi_b = xi_(a+b), it fixes x and preserves <,> and time orientation.
    """

    t: float

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise InvalidParamError(f"non-finite group parameter {self.t}")

    @classmethod
    def identity(cls) -> "ParabolicIsometry":
        return cls(0.0)

    def matrix(self) -> np.ndarray:
        t = self.t
        return np.array([[1.0, 0.0, 0.0], [0.5 * t * t, 1.0, t], [t, 0.0, 1.0]])

    def inverse(self) -> "ParabolicIsometry":
        return ParabolicIsometry(-self.t)

    def apply(self, p: VectorLike) -> LorentzVector:
        return apply_isometry(self, p)


def apply_isometry(g: ParabolicIsometry, p: VectorLike) -> LorentzVector:
    """(x, y, z) xi_t = (x + t^2 y / 2 + t z, y, t y + z)."""
    x, y, z = as_array(p)
    t = g.t
    return LorentzVector(x + 0.5 * t * t * y + t * z, y, t * y + z)


def compose(g1: ParabolicIsometry, g2: ParabolicIsometry) -> ParabolicIsometry:
    return ParabolicIsometry(g1.t + g2.t)
