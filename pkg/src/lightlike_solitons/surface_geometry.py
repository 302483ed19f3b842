"""
Extrinsic geometry of parametrized surface patches in L^3.

For a patch psi(p, q) this module computes:
- the first fundamental form (E, F, G) and its discriminant EG - F^2
- the oriented unit normal N, its sign eps = <N, N> and W = 1 / N_y
- the second fundamental form (e, f, g) and the shape operator
- mean curvature H = (Eg - 2Ff + Ge) / (EG - F^2) (un-halved trace) and K
- the translating-soliton residual H - <K, N> for a light-like direction K

Patches carry analytic partials or get them from central differences
(``numeric_partials``), which is also how analytic partials are cross-checked.

Sign conventions:
- N is flipped so that its y-component is positive; for a graph x = u(y, z)
  this gives N = (-u_y, 1, u_z) / W
- <N, N> = eps = -sign(EG - F^2): space-like patches have time-like normals
"""

from dataclasses import dataclass
from enum import Enum
import logging
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from lightlike_solitons.errors import DegenerateMetricError, OutOfDomainError, StencilOutOfDomainError, InvalidParamError
from lightlike_solitons.minkowski import LIGHTLIKE_DIRECTION, LorentzVector, VectorLike, as_array, cross_array, inner

logger = logging.getLogger(__name__)

DEFAULT_DEGENERACY_TOL = 1e-12
DEFAULT_FD_STEP = 1e-4

Point = Tuple[float, float]
PositionMap = Callable[[float, float], np.ndarray]
FirstPartialsMap = Callable[[float, float], Tuple[np.ndarray, np.ndarray]]
SecondPartialsMap = Callable[[float, float], Tuple[np.ndarray, np.ndarray, np.ndarray]]


class DomainKind(str, Enum):
    FULL_PLANE = "full_plane"
    HORIZONTAL_STRIP = "horizontal_strip"
    HALF_PLANE = "half_plane"
    INTERVAL_PRODUCT = "interval_product"


class PartialsKind(str, Enum):
    ANALYTIC = "analytic"
    FINITE_DIFFERENCE = "finite_difference"


def _open_interval(lo: float, hi: float, name: str) -> Tuple[float, float]:
    lo, hi = float(lo), float(hi)
    if math.isnan(lo) or math.isnan(hi) or not lo < hi:
        raise InvalidParamError(f"{name} bounds must satisfy lo < hi, got ({lo}, {hi})")
    return lo, hi


@dataclass(frozen=True)
class DomainSpec:
    """
    Parameter domain of a patch: an open box minus excluded lines.

    Attributes:
        kind: shape tag used in reports
        p_bounds: open interval for the first parameter
        q_bounds: open interval for the second parameter
        excluded_lines: q-values that are not part of the domain (boundaries, poles)
        excluded_p: p-values that are not part of the domain
    """

    kind: DomainKind
    p_bounds: Tuple[float, float] = (-math.inf, math.inf)
    q_bounds: Tuple[float, float] = (-math.inf, math.inf)
    excluded_lines: Tuple[float, ...] = ()
    excluded_p: Tuple[float, ...] = ()

    def __post_init__(self):
        _open_interval(*self.p_bounds, "p")
        _open_interval(*self.q_bounds, "q")

    @classmethod
    def full_plane(cls) -> "DomainSpec":
        return cls(DomainKind.FULL_PLANE)

    @classmethod
    def horizontal_strip(cls, q_lo: float, q_hi: float) -> "DomainSpec":
        bounds = _open_interval(q_lo, q_hi, "strip")
        return cls(DomainKind.HORIZONTAL_STRIP, q_bounds=bounds, excluded_lines=bounds)

    @classmethod
    def half_plane(cls, q0: float, upper: bool = True) -> "DomainSpec":
        bounds = (float(q0), math.inf) if upper else (-math.inf, float(q0))
        return cls(DomainKind.HALF_PLANE, q_bounds=bounds, excluded_lines=(float(q0),))

    @classmethod
    def interval_product(
        cls,
        p_bounds: Tuple[float, float],
        q_bounds: Tuple[float, float] = (-math.inf, math.inf),
        excluded_p: Sequence[float] = (),
    ) -> "DomainSpec":
        return cls(
            DomainKind.INTERVAL_PRODUCT,
            p_bounds=_open_interval(*p_bounds, "p"),
            q_bounds=_open_interval(*q_bounds, "q"),
            excluded_p=tuple(float(v) for v in excluded_p),
        )

    def contains(self, p: float, q: float, margin: float = 0.0) -> bool:
        """True when (p, q) lies in the domain at distance > margin from its boundary."""
        if not (math.isfinite(p) and math.isfinite(q)):
            return False
        return self.boundary_distance(p, q) > margin

    def boundary_distance(self, p: float, q: float) -> float:
        """Signed distance to the nearest boundary or excluded line (inf if there is none)."""
        p_lo, p_hi = self.p_bounds
        q_lo, q_hi = self.q_bounds
        d = min(p - p_lo, p_hi - p, q - q_lo, q_hi - q)
        for line in self.excluded_lines:
            d = min(d, abs(q - line))
        for val in self.excluded_p:
            d = min(d, abs(p - val))
        return d


@dataclass(frozen=True)
class NumericPartials:
    """Central-difference partials of a map at a point."""

    p: np.ndarray
    q: np.ndarray
    pp: np.ndarray
    pq: np.ndarray
    qq: np.ndarray


def _step(h: Optional[float], coord: float) -> float:
    return (DEFAULT_FD_STEP if h is None else h) * max(1.0, abs(coord))


def numeric_partials(
    position_map: Callable[[float, float], object],
    at: Point,
    h: Optional[float] = None,
    domain: Optional[DomainSpec] = None,
) -> NumericPartials:
    """
    Second-order central differences of ``position_map`` at ``at``.

    The map may be scalar or vector valued. Steps scale with the coordinate:
    h_p = h * max(1, |p|), likewise for q.

    Args:
        position_map: (p, q) -> value
        at: evaluation point
        h: relative step, > 0 (default DEFAULT_FD_STEP)
        domain: when given, every stencil point must lie inside it

    Returns:
        NumericPartials with first and second derivatives

    Raises:
        StencilOutOfDomainError: if the 9-point stencil leaves ``domain``
    """
    if h is not None and not h > 0:
        raise InvalidParamError("finite-difference step must be > 0")
    p, q = float(at[0]), float(at[1])
    hp, hq = _step(h, p), _step(h, q)

    if domain is not None:
        for dp in (-hp, 0.0, hp):
            for dq in (-hq, 0.0, hq):
                if not domain.contains(p + dp, q + dq):
                    raise StencilOutOfDomainError(
                        f"stencil point ({p + dp}, {q + dq}) outside {domain.kind.value} domain"
                    )

    def f(a, b):
        return np.asarray(position_map(a, b), dtype=float)

    c = f(p, q)
    fpp_, fpm = f(p + hp, q), f(p - hp, q)
    fqp, fqm = f(p, q + hq), f(p, q - hq)
    cross = f(p + hp, q + hq) - f(p + hp, q - hq) - f(p - hp, q + hq) + f(p - hp, q - hq)

    return NumericPartials(
        p=(fpp_ - fpm) / (2 * hp),
        q=(fqp - fqm) / (2 * hq),
        pp=(fpp_ - 2 * c + fpm) / (hp * hp),
        pq=cross / (4 * hp * hq),
        qq=(fqp - 2 * c + fqm) / (hq * hq),
    )


@dataclass(frozen=True)
class SurfacePatch:
    """
    An immersion (p, q) -> L^3 with its partial derivatives.

    Attributes:
        position: (p, q) -> array of shape (3,)
        first_partials: (p, q) -> (psi_p, psi_q)
        second_partials: (p, q) -> (psi_pp, psi_pq, psi_qq)
        domain: parameter domain
        partials_kind: whether partials are analytic or central differences
        name: label used in logs and reports
    """

    position: PositionMap
    first_partials: FirstPartialsMap
    second_partials: SecondPartialsMap
    domain: DomainSpec
    partials_kind: PartialsKind = PartialsKind.ANALYTIC
    name: str = "patch"

    @classmethod
    def from_position(
        cls,
        position: PositionMap,
        domain: DomainSpec,
        h: Optional[float] = None,
        name: str = "patch",
    ) -> "SurfacePatch":
        """Patch whose partials come from central differences of ``position``."""

        def first(p, q):
            d = numeric_partials(position, (p, q), h, domain)
            return d.p, d.q

        def second(p, q):
            d = numeric_partials(position, (p, q), h, domain)
            return d.pp, d.pq, d.qq

        return cls(position, first, second, domain, PartialsKind.FINITE_DIFFERENCE, name)

    def translated(self, offset: VectorLike) -> "SurfacePatch":
        """The patch moved by a constant ambient vector (partials unchanged)."""
        shift = as_array(offset)
        base = self.position
        return SurfacePatch(
            position=lambda p, q: np.asarray(base(p, q), dtype=float) + shift,
            first_partials=self.first_partials,
            second_partials=self.second_partials,
            domain=self.domain,
            partials_kind=self.partials_kind,
            name=f"{self.name}+{tuple(shift.tolist())}",
        )


def graph_patch(
    u: Callable[[float, float], float],
    partials: Callable[[float, float], Sequence[float]],
    domain: DomainSpec,
    name: str = "graph",
) -> SurfacePatch:
    """
    Patch psi(y, z) = (u(y, z), y, z) of a graph over the (y, z)-plane.

    ``partials`` returns (u_y, u_z, u_yy, u_yz, u_zz).
    """

    def position(y, z):
        return np.array([u(y, z), y, z], dtype=float)

    def first(y, z):
        u_y, u_z = partials(y, z)[:2]
        return np.array([u_y, 1.0, 0.0]), np.array([u_z, 0.0, 1.0])

    def second(y, z):
        _, _, u_yy, u_yz, u_zz = partials(y, z)
        return np.array([u_yy, 0.0, 0.0]), np.array([u_yz, 0.0, 0.0]), np.array([u_zz, 0.0, 0.0])

    return SurfacePatch(position, first, second, domain, PartialsKind.ANALYTIC, name)


@dataclass(frozen=True)
class FundamentalForms:
    """All pointwise extrinsic quantities of a patch."""

    E: float
    F: float
    G: float
    e: float
    f: float
    g: float
    N: LorentzVector
    W: float
    eps: int
    H: float
    K: float
    disc: float

    def first_matrix(self) -> np.ndarray:
        return np.array([[self.E, self.F], [self.F, self.G]])

    def second_matrix(self) -> np.ndarray:
        return np.array([[self.e, self.f], [self.f, self.g]])


# ===== pointwise building blocks =====


def _tangents(patch: SurfacePatch, at: Point) -> Tuple[np.ndarray, np.ndarray]:
    p, q = at
    if not patch.domain.contains(p, q):
        raise OutOfDomainError(f"{at} is outside the domain of {patch.name}")
    fp, fq = patch.first_partials(p, q)
    return np.asarray(fp, dtype=float), np.asarray(fq, dtype=float)


def _first_form_from(fp: np.ndarray, fq: np.ndarray, tol: float) -> Tuple[float, float, float, float]:
    E, F, G = inner(fp, fp), inner(fp, fq), inner(fq, fq)
    disc = E * G - F * F
    scale = max(1.0, abs(E), abs(F), abs(G))
    if not abs(disc) >= tol * scale * scale:
        raise DegenerateMetricError(f"EG - F^2 = {disc:.3e} with (E, F, G) = ({E:.6g}, {F:.6g}, {G:.6g})")
    return E, F, G, disc


def _normal_from(fp: np.ndarray, fq: np.ndarray) -> Tuple[np.ndarray, float, int]:
    c = cross_array(fp, fq)
    qc = inner(c, c)  # equals -(EG - F^2)
    n = c / math.sqrt(abs(qc))
    if n[1] < 0:
        n = -n
    W = 1.0 / n[1] if n[1] > 0 else math.inf
    return n, W, (1 if qc > 0 else -1)


def first_form(patch: SurfacePatch, at: Point, tol: float = DEFAULT_DEGENERACY_TOL) -> Tuple[float, float, float, float]:
    """
    First fundamental form at a point.

    Returns:
        (E, F, G, disc) with disc = EG - F^2

    Raises:
        OutOfDomainError: point outside the patch domain
        DegenerateMetricError: |disc| < tol * max(1, |E|, |F|, |G|)^2
    """
    return _first_form_from(*_tangents(patch, at), tol)


def unit_normal(patch: SurfacePatch, at: Point, tol: float = DEFAULT_DEGENERACY_TOL) -> Tuple[LorentzVector, float, int]:
    """Oriented unit normal N, W = 1 / N_y and eps = <N, N>."""
    fp, fq = _tangents(patch, at)
    _first_form_from(fp, fq, tol)
    n, W, eps = _normal_from(fp, fq)
    return LorentzVector.from_array(n), W, eps


def fundamental_forms(patch: SurfacePatch, at: Point, tol: float = DEFAULT_DEGENERACY_TOL) -> FundamentalForms:
    fp, fq = _tangents(patch, at)
    E, F, G, disc = _first_form_from(fp, fq, tol)
    n, W, eps = _normal_from(fp, fq)

    fpp, fpq, fqq = patch.second_partials(*at)
    e, f, g = inner(n, fpp), inner(n, fpq), inner(n, fqq)

    H = (E * g - 2 * F * f + G * e) / disc
    K = (e * g - f * f) / disc
    return FundamentalForms(E, F, G, e, f, g, LorentzVector.from_array(n), W, eps, H, K, disc)


def second_form(patch: SurfacePatch, at: Point, tol: float = DEFAULT_DEGENERACY_TOL) -> Tuple[float, float, float]:
    ff = fundamental_forms(patch, at, tol)
    return ff.e, ff.f, ff.g


def shape_operator(patch: SurfacePatch, at: Point, tol: float = DEFAULT_DEGENERACY_TOL) -> np.ndarray:
    """A = I^-1 II as a 2x2 matrix in the (p, q) frame."""
    ff = fundamental_forms(patch, at, tol)
    return np.linalg.solve(ff.first_matrix(), ff.second_matrix())


def principal_curvatures(patch: SurfacePatch, at: Point, tol: float = DEFAULT_DEGENERACY_TOL) -> np.ndarray:
    """
    Eigenvalues of the shape operator sorted by real part.

    The shape operator of a time-like patch need not be diagonalizable over
    the reals; complex values are only returned when the imaginary parts are
    above roundoff.
    """
    A = shape_operator(patch, at, tol)
    vals = np.linalg.eigvals(A)
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.all(np.abs(vals.imag) <= 1e-12 * scale):
        vals = vals.real
    return vals[np.argsort(vals.real)]


def curvatures(patch: SurfacePatch, at: Point, tol: float = DEFAULT_DEGENERACY_TOL) -> Tuple[float, float]:
    ff = fundamental_forms(patch, at, tol)
    return ff.H, ff.K


def soliton_residual(
    patch: SurfacePatch,
    at: Point,
    direction: VectorLike = LIGHTLIKE_DIRECTION,
    tol: float = DEFAULT_DEGENERACY_TOL,
) -> float:
    """H - <K, N>; vanishes where the patch is a translating soliton in direction K."""
    ff = fundamental_forms(patch, at, tol)
    return ff.H - inner(direction, ff.N)
