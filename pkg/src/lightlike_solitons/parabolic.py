"""
Translating solitons invariant under the parabolic group A_3.

An A_3-invariant surface is the sweep psi(s, t) = xi_t . (x(s), y(s), 0)
= (x + t^2 y / 2, y, t y) of a profile curve in the plane z = 0. It is a
soliton iff the profile solves

    y x' y'' + 2 x' y'^2 - y y' x'' = 2 y x' y'^2

whose solutions are, up to reparametrization:
- case 1 (y = s):  x(s) = a0 (2 s^2 + 2 s + 1) e^(-2s) + a1,  a0 != 0, s != 0
- case 2 (x = s):  y(s) = phi^-1(b0 s + b1),  b0 != 0, b0 s + b1 in (-inf, 0) minus {-1/4}

with phi(r) = -(2 r^2 + 2 r + 1) e^(-2r) / 4, an increasing bijection R -> (-inf, 0),
phi'(r) = r^2 e^(-2r) and phi(0) = -1/4. Case 1 is x = a1 - 4 a0 phi(s).
"""

from dataclasses import dataclass, field
from enum import Enum
import logging
import math
from typing import Iterable, List, NamedTuple, Tuple

import numpy as np
from scipy.optimize import brentq

from lightlike_solitons.errors import InvalidParamError, NoConvergenceError, OutOfDomainError, OutOfRangeError
from lightlike_solitons.minkowski import CausalCharacter, LorentzVector, ParabolicIsometry, apply_isometry
from lightlike_solitons.surface_geometry import DomainSpec, SurfacePatch

logger = logging.getLogger(__name__)

DOMAIN_MARGIN = 1e-8
PHI_INVERSE_TOL = 1e-12
PHI_INVERSE_MAX_ITER = 200
PHI_AT_ZERO = -0.25


# ===== phi and its inverse =====


def phi(r: float) -> float:
    """phi(r) = -(2r^2 + 2r + 1) e^(-2r) / 4; -inf once e^(-2r) overflows."""
    try:
        return -0.25 * (2 * r * r + 2 * r + 1) * math.exp(-2 * r)
    except OverflowError:
        return -math.inf


def phi_prime(r: float) -> float:
    try:
        return r * r * math.exp(-2 * r)
    except OverflowError:
        return math.inf


def phi_shifted(r: float) -> float:
    """
    phi(r) + 1/4 without cancellation near r = 0.

    phi(r) + 1/4 = e^(-2r) / 4 * sum_{n >= 3} (2r)^n / n!
    """
    if abs(r) >= 0.1:
        return phi(r) + 0.25
    x = 2 * r
    term, total = x**3 / 6.0, 0.0
    n = 3
    while abs(term) > 1e-18 * max(abs(total), 1e-300) and n < 40:
        total += term
        n += 1
        term *= x / n
    return 0.25 * math.exp(-x) * total


def phi_printed(r: float) -> float:
    """
    The alternative normalization (2r^2 - 2r + 1) e^(-2r), onto (0, inf).

    It equals -4 e^-2 phi(r - 1) and is decreasing.
    """
    return (2 * r * r - 2 * r + 1) * math.exp(-2 * r)


def phi_inverse(v: float, tol: float = PHI_INVERSE_TOL, max_iter: int = PHI_INVERSE_MAX_ITER) -> float:
    """
    Solve phi(r) = v.

    The bracket is grown by doubling until it straddles the root and then
    handed to Brent's method. Near v = -1/4 the root is solved against
    phi_shifted to keep digits in the flat cubic region around r = 0.

    Args:
        v: target value in (-inf, 0)
        tol: accept r when |phi(r) - v| <= tol * max(1, |v|)
        max_iter: budget for bracket growth and for Brent iterations

    Returns:
        r with phi(r) = v

    Raises:
        OutOfRangeError: if v >= 0 or v is not finite
        NoConvergenceError: if the budget is exhausted or the residual check fails
    """
    if not math.isfinite(v) or v >= 0:
        raise OutOfRangeError(f"phi maps onto (-inf, 0); cannot invert at {v}")
    if not tol > 0:
        raise InvalidParamError("tol must be > 0")

    if -0.5 <= v <= -0.125:
        target = v + 0.25

        def g(r):
            return phi_shifted(r) - target
    else:

        def g(r):
            return phi(r) - v

    # ===== STEP 1: bracket =====
    lo, hi = -1.0, 1.0
    for _ in range(max_iter):
        if g(lo) <= 0:
            break
        lo *= 2
    else:
        raise NoConvergenceError(f"could not bracket phi^-1({v}) from below")
    for _ in range(max_iter):
        if g(hi) >= 0:
            break
        hi *= 2
    else:
        raise NoConvergenceError(f"could not bracket phi^-1({v}) from above")

    # ===== STEP 2: Brent =====
    if g(lo) == 0:
        return lo
    if g(hi) == 0:
        return hi
    r, info = brentq(g, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=max_iter, full_output=True, disp=False)
    if not info.converged:
        raise NoConvergenceError(f"Brent iteration for phi^-1({v}) stopped: {info.flag}")

    # ===== STEP 3: postcondition =====
    if abs(g(r)) > tol * max(1.0, abs(v)):
        raise NoConvergenceError(f"phi^-1({v}) residual {abs(g(r)):.3e} above tolerance {tol:.1e}")
    return float(r)


def phi_printed_inverse(v: float) -> float:
    """Inverse of phi_printed on (0, inf): r = 1 + phi^-1(-e^2 v / 4)."""
    if not math.isfinite(v) or v <= 0:
        raise OutOfRangeError(f"the printed phi maps onto (0, inf); cannot invert at {v}")
    return 1.0 + phi_inverse(-math.exp(2.0) * v / 4.0)


# ===== profiles =====


class ProfileCase(str, Enum):
    EXPLICIT_X_OF_S = "parabolic_1"
    PHI_INVERSE_Y_OF_S = "parabolic_2"


class Branch(str, Enum):
    PLUS = "plus"  # y > 0
    MINUS = "minus"  # y < 0


class ProfileJet(NamedTuple):
    x: float
    y: float
    dx: float
    dy: float
    ddx: float
    ddy: float


def _profile_ode_terms(j: ProfileJet) -> Tuple[float, float, float, float]:
    return (j.y * j.dx * j.ddy, 2 * j.dx * j.dy**2, -j.y * j.dy * j.ddx, -2 * j.y * j.dx * j.dy**2)


@dataclass(frozen=True)
class ParabolicProfile:
    """
    Profile curve (x(s), y(s), 0) of an A_3-invariant soliton.

    Attributes:
        case: EXPLICIT_X_OF_S (uses a0, a1) or PHI_INVERSE_Y_OF_S (uses b0, b1)
        s_min, s_max: open parameter interval J
        margin: exclusion distance from the ends of J and from singular values
        phi_tol, phi_max_iter: accuracy and iteration budget of phi^-1 (case 2)
    """

    case: ProfileCase
    s_min: float
    s_max: float
    a0: float = 0.0
    a1: float = 0.0
    b0: float = 0.0
    b1: float = 0.0
    margin: float = DOMAIN_MARGIN
    phi_tol: float = field(default=PHI_INVERSE_TOL, compare=False)
    phi_max_iter: int = field(default=PHI_INVERSE_MAX_ITER, compare=False)
    domain: DomainSpec = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "case", ProfileCase(self.case))
        for name in ("s_min", "s_max", "a0", "a1", "b0", "b1"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParamError(f"{name} must be finite")
        if not self.s_min < self.s_max:
            raise InvalidParamError(f"empty s-interval ({self.s_min}, {self.s_max})")

        if self.case is ProfileCase.EXPLICIT_X_OF_S:
            if self.a0 == 0:
                raise InvalidParamError("case 1 requires a0 != 0 (a0 = 0 gives a degenerate sweep)")
            if self.s_min < 0 < self.s_max:
                raise InvalidParamError("the s-interval must not contain 0, where x'(0) = 0")
            excluded = (0.0,)
        else:
            if self.b0 == 0:
                raise InvalidParamError("case 2 requires b0 != 0")
            v_lo, v_hi = sorted((self.v(self.s_min), self.v(self.s_max)))
            if v_hi > 0:
                raise OutOfDomainError(f"b0 s + b1 reaches {v_hi} > 0 on the s-interval")
            if v_lo < PHI_AT_ZERO < v_hi:
                raise OutOfDomainError("b0 s + b1 crosses -1/4 (y = 0) inside the s-interval")
            excluded = ((PHI_AT_ZERO - self.b1) / self.b0, -self.b1 / self.b0)
        object.__setattr__(
            self, "domain", DomainSpec.interval_product((self.s_min, self.s_max), excluded_p=excluded)
        )

    def v(self, s: float) -> float:
        """Argument b0 s + b1 of phi^-1 (case 2)."""
        return self.b0 * s + self.b1

    @property
    def branch(self) -> Branch:
        if self.case is ProfileCase.EXPLICIT_X_OF_S:
            return Branch.PLUS if self.s_min >= 0 else Branch.MINUS
        return Branch.PLUS if min(self.v(self.s_min), self.v(self.s_max)) >= PHI_AT_ZERO else Branch.MINUS

    @property
    def eps(self) -> int:
        """sign(x' y'), which is <N, N> of the sweep."""
        if self.case is ProfileCase.EXPLICIT_X_OF_S:
            return -1 if self.a0 > 0 else 1
        return 1 if self.b0 > 0 else -1

    def causal_character(self) -> CausalCharacter:
        return CausalCharacter.SPACELIKE if self.eps < 0 else CausalCharacter.TIMELIKE

    def contains(self, s: float) -> bool:
        return self.domain.contains(s, 0.0, self.margin)

    def _require(self, s: float):
        if not self.contains(s):
            raise OutOfDomainError(f"s = {s} outside the admissible interval of the {self.case.value} profile")

    def jet(self, s: float) -> ProfileJet:
        """(x, y, x', y', x'', y'') at s."""
        self._require(s)
        if self.case is ProfileCase.EXPLICIT_X_OF_S:
            e = math.exp(-2 * s)
            x = self.a1 - 4 * self.a0 * phi(s)
            return ProfileJet(x, s, -4 * self.a0 * s * s * e, 1.0, -8 * self.a0 * s * (1 - s) * e, 0.0)
        y = phi_inverse(self.v(s), self.phi_tol, self.phi_max_iter)
        dy = self.b0 * math.exp(2 * y) / (y * y)
        return ProfileJet(s, y, 1.0, dy, 0.0, 2 * dy * dy * (1 - 1 / y))

    def curve(self, s: float) -> LorentzVector:
        j = self.jet(s)
        return LorentzVector(j.x, j.y, 0.0)

    def ode_residual(self, s: float) -> float:
        """y x' y'' + 2 x' y'^2 - y y' x'' - 2 y x' y'^2."""
        return math.fsum(_profile_ode_terms(self.jet(s)))

    def ode_scale(self, s: float) -> float:
        return max(1.0, max(abs(t) for t in _profile_ode_terms(self.jet(s))))


def parabolic_profile_case1(a0: float, a1: float = 0.0, s_interval: Tuple[float, float] = (0.1, 3.0)) -> ParabolicProfile:
    return ParabolicProfile(ProfileCase.EXPLICIT_X_OF_S, s_interval[0], s_interval[1], a0=a0, a1=a1)


def parabolic_profile_case2(b0: float, b1: float, s_interval: Tuple[float, float]) -> ParabolicProfile:
    return ParabolicProfile(ProfileCase.PHI_INVERSE_Y_OF_S, s_interval[0], s_interval[1], b0=b0, b1=b1)


def printed_profile_ode_residual(b2: float, b3: float, s: float) -> Tuple[float, float]:
    """
    Profile-ODE residual and scale for y = phi_printed^-1(b2 s + b3), x = s.

    This alternative normalization is a shifted solution: its residual is
    -2 y'^2 / (y - 1), not zero.
    """
    y = phi_printed_inverse(b2 * s + b3)
    dy = -b2 * math.exp(2 * y) / (4 * (y - 1) ** 2)
    ddy = 2 * dy * dy * (1 - 1 / (y - 1))
    terms = _profile_ode_terms(ProfileJet(s, y, 1.0, dy, 0.0, ddy))
    return math.fsum(terms), max(1.0, max(abs(t) for t in terms))


# ===== sweep surfaces =====


@dataclass(frozen=True)
class ParabolicSurface:
    """The A_3 sweep psi(s, t) = (x + t^2 y / 2, y, t y) of a profile."""

    profile: ParabolicProfile

    def position(self, s: float, t: float) -> np.ndarray:
        j = self.profile.jet(s)
        return np.array([j.x + 0.5 * t * t * j.y, j.y, t * j.y])

    def first_partials(self, s: float, t: float):
        j = self.profile.jet(s)
        return (
            np.array([j.dx + 0.5 * t * t * j.dy, j.dy, t * j.dy]),
            np.array([t * j.y, 0.0, j.y]),
        )

    def second_partials(self, s: float, t: float):
        j = self.profile.jet(s)
        return (
            np.array([j.ddx + 0.5 * t * t * j.ddy, j.ddy, t * j.ddy]),
            np.array([t * j.dy, 0.0, j.dy]),
            np.array([j.y, 0.0, 0.0]),
        )

    def patch(self) -> SurfacePatch:
        return SurfacePatch(
            self.position,
            self.first_partials,
            self.second_partials,
            self.profile.domain,
            name=f"{self.profile.case.value}_sweep",
        )

    def first_form_closed(self, s: float) -> Tuple[float, float, float]:
        """(E, F, G) = (-2 x' y', 0, y^2), independent of t."""
        j = self.profile.jet(s)
        return -2 * j.dx * j.dy, 0.0, j.y * j.y

    def W(self, s: float) -> float:
        """W = sqrt(2 eps x' / y')."""
        j = self.profile.jet(s)
        return math.sqrt(2 * self.profile.eps * j.dx / j.dy)

    def orbit_shift(self, s: float, t: float, t_shift: float) -> LorentzVector:
        """xi_t' . psi(s, t), which equals psi(s, t + t')."""
        return apply_isometry(ParabolicIsometry(t_shift), self.position(s, t))

    def singular_limit_point(self) -> LorentzVector:
        """Limit of psi(s, t) as s -> 0 in case 1: (a0 + a1, 0, 0) for every t."""
        if self.profile.case is not ProfileCase.EXPLICIT_X_OF_S:
            raise InvalidParamError("the s -> 0 limit point is defined for case 1 profiles only")
        return LorentzVector(self.profile.a0 + self.profile.a1, 0.0, 0.0)

    def singular_limit_deviations(self, s_values: Iterable[float], t: float = 0.0) -> List[float]:
        """Euclidean distances |psi(s, t) - limit point| along s_values."""
        limit = self.singular_limit_point()
        a0 = self.profile.a0
        out = []
        for s in s_values:
            self.profile._require(s)
            # x - (a0 + a1) = -4 a0 (phi(s) + 1/4), kept exact for small s
            dx = -4 * a0 * phi_shifted(s) + 0.5 * t * t * s
            out.append(float(np.linalg.norm([dx, s - limit.y, t * s - limit.z])))
        return out


def sweep_surface(profile: ParabolicProfile) -> ParabolicSurface:
    return ParabolicSurface(profile)
