"""
VerificationWorkflow - runs the numerical invariant suites behind `verify`.

For one family, or for every default sample with target "all", it checks:
1. Graph families: PDE residual, u_yz = 0, flatness, H W = -1, causal
   character, disc = -eps W^2, normal orthogonality, analytic vs
   finite-difference partials, closed-form Christoffel symbols, witness
   lengths and (entire families) conservation of I(a', a') along geodesics
2. Parabolic profiles: profile ODE residual, soliton residual of the sweep,
   invariance under the parabolic group, closed-form first fundamental form,
   causal character and (case 1) the s -> 0 limit point
3. Core identities (target "all" only): signature of <,>, the light-like
   direction, group laws of A_3, phi round trips and monotonicity, and the
   relation between the two phi normalizations

Every check records the largest observed error against its tolerance; the
report passes when every check passes.
"""

import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from lightlike_solitons.completeness import check_witness
from lightlike_solitons.descriptors import Family, describe
from lightlike_solitons.errors import InvalidParamError, SolitonError
from lightlike_solitons.families import FamilyKind, GraphSolitonFamily, Half, grim_reaper
from lightlike_solitons.grid import graph_sample_box
from lightlike_solitons.geodesics import ChristoffelSymbols, InducedMetric, christoffel, integrate_geodesic
from lightlike_solitons.minkowski import (
    LIGHTLIKE_DIRECTION,
    METRIC,
    CausalCharacter,
    ParabolicIsometry,
    compose,
    cross_array,
    inner,
    norm_squared,
)
from lightlike_solitons.parabolic import (
    ParabolicProfile,
    ProfileCase,
    phi,
    phi_inverse,
    phi_prime,
    phi_printed,
    sweep_surface,
)
from lightlike_solitons.settings import Settings, get_settings
from lightlike_solitons.surface_geometry import fundamental_forms, numeric_partials, soliton_residual
from lightlike_solitons.tools.error_metrics import summarize_errors

logger = logging.getLogger(__name__)

FD_INTERIOR = 0.5


class CheckResult(BaseModel):
    name: str
    target: str
    passed: bool
    max_error: Optional[float] = None
    tol: float
    samples: int
    pass_percentage: float
    detail: str = ""


class VerificationReport(BaseModel):
    target: str
    passed: bool
    failed_checks: List[str] = Field(default_factory=list)
    checks: List[CheckResult] = Field(default_factory=list)


def family_label(family: Family) -> str:
    desc = describe(family)
    params = ", ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in desc.params.items())
    return f"{desc.kind}({params})"


# ===== sample sets =====


def default_graph_samples() -> List[GraphSolitonFamily]:
    """Parameter sweep lambda in {0.5, 1, 2}, z0 in {0, 1}, a1 in {+-1, +-2}, b1 in {0, 1, 3}."""
    out = []
    for lam in (0.5, 1.0, 2.0):
        for z0 in (0.0, 1.0):
            out.append(GraphSolitonFamily(FamilyKind.TYPE_I, lam=lam, z0=z0, a0=0.5))
            for k in (0, 1):
                out.append(GraphSolitonFamily(FamilyKind.TYPE_III, lam=lam, z0=z0, b0=-0.5, k=k))
            for half in Half:
                out.append(GraphSolitonFamily(FamilyKind.TYPE_IV, lam=lam, z0=z0, a0=0.5, half=half))
    for a1 in (-2.0, -1.0, 1.0, 2.0):
        for b1 in (0.0, 1.0, 3.0):
            out.append(GraphSolitonFamily(FamilyKind.TYPE_II, a1=a1, b0=0.5, b1=b1))
    out += [grim_reaper("theorem"), grim_reaper("curve")]
    return out


def default_parabolic_samples() -> List[ParabolicProfile]:
    return [
        ParabolicProfile(ProfileCase.EXPLICIT_X_OF_S, 0.1, 3.0, a0=1.0, a1=0.0),
        ParabolicProfile(ProfileCase.EXPLICIT_X_OF_S, 0.1, 3.0, a0=-1.0, a1=0.5),
        ParabolicProfile(ProfileCase.EXPLICIT_X_OF_S, -3.0, -0.1, a0=1.0, a1=0.0),
        ParabolicProfile(ProfileCase.PHI_INVERSE_Y_OF_S, -5.0, 0.5, b0=1.0, b1=-1.0),
        ParabolicProfile(ProfileCase.PHI_INVERSE_Y_OF_S, -0.5, 5.0, b0=-1.0, b1=-1.0),
    ]


def _grid(box, n: int) -> List[Tuple[float, float]]:
    (y0, y1), (z0, z1) = box
    return [(float(y), float(z)) for y in np.linspace(y0, y1, n) for z in np.linspace(z0, z1, n)]


def expected_christoffel(family: GraphSolitonFamily, z: float) -> ChristoffelSymbols:
    """Closed-form symbols of the four graph metrics; only Gamma^k_11 or Gamma^k_22 are nonzero."""
    lam, w = family.lam, family.w(z)
    if family.kind is FamilyKind.TYPE_II:
        return ChristoffelSymbols(-1.0, -family.b1, 0.0, 0.0, 0.0, 0.0)
    if family.kind is FamilyKind.TYPE_I:
        return ChristoffelSymbols(0.0, 0.0, 0.0, 0.0, -1 / (4 * lam**2), -math.tanh(w) / (2 * lam))
    if family.kind is FamilyKind.TYPE_III:
        return ChristoffelSymbols(0.0, 0.0, 0.0, 0.0, 1 / (4 * lam**2), math.tan(w) / (2 * lam))
    return ChristoffelSymbols(0.0, 0.0, 0.0, 0.0, -1 / (4 * lam**2), -1 / (math.tanh(w) * 2 * lam))


class VerificationWorkflow:
    """
    Orchestrates the verify suite.

    Attributes:
        settings: validated settings; pass thresholds come from ``settings.verification``,
            numerical tolerances from ``settings.tolerances``
        residual_tol: optional override of the residual tolerances (--tol)
        checks: results collected by the current run
    """

    def __init__(self, settings: Optional[Settings] = None, residual_tol: Optional[float] = None):
        self.settings = settings or get_settings()
        self.tols = self.settings.verification
        self.residual_tol = residual_tol
        self.rng = np.random.default_rng(self.settings.probe.seed)
        self.checks: List[CheckResult] = []

    def _record(self, name: str, target: str, errors: Iterable[float], tol: float, detail: str = "") -> CheckResult:
        summary = summarize_errors(errors, tol)
        result = CheckResult(
            name=name,
            target=target,
            passed=summary.passed,
            max_error=summary.max,
            tol=tol,
            samples=summary.count_samples,
            pass_percentage=summary.pass_percentage,
            detail=detail,
        )
        self.checks.append(result)
        log = logger.debug if result.passed else logger.warning
        log("%s [%s]: max error %s (tol %g) %s", name, target, summary.max, tol, "ok" if result.passed else "FAILED")
        return result

    def _residual_tol(self, default: float) -> float:
        return default if self.residual_tol is None else self.residual_tol

    def run(self, target: Union[str, Family] = "all") -> VerificationReport:
        """
        Run the suite for ``target``: a family instance or "all".

        Returns:
            VerificationReport; ``passed`` is the conjunction of every check
        """
        self.checks = []
        if isinstance(target, str):
            if target != "all":
                raise InvalidParamError(f"unknown verification target {target!r}")
            label = "all"
            logger.info("===== STEP 1: core identities =====")
            self.check_core()
            logger.info("===== STEP 2: graph families =====")
            for fam in default_graph_samples():
                self.check_graph_family(fam)
            for kind in FamilyKind:
                self.check_witness_length(GraphSolitonFamily(kind, a1=1.0))
            self.check_witness_length(GraphSolitonFamily(FamilyKind.TYPE_II, a1=-1.0))
            for fam in (GraphSolitonFamily(FamilyKind.TYPE_I), GraphSolitonFamily(FamilyKind.TYPE_II, a1=2.0, b1=1.0)):
                self.check_first_integral(fam)
            logger.info("===== STEP 3: parabolic profiles =====")
            for prof in default_parabolic_samples():
                self.check_parabolic_profile(prof)
        elif isinstance(target, GraphSolitonFamily):
            label = family_label(target)
            self.check_graph_family(target)
            self.check_witness_length(target)
            if target.is_entire:
                self.check_first_integral(target)
        else:
            label = family_label(target)
            self.check_parabolic_profile(target)

        failed = [f"{c.name} [{c.target}]" for c in self.checks if not c.passed]
        report = VerificationReport(target=label, passed=not failed, failed_checks=failed, checks=self.checks)
        logger.info("verification of %s: %d checks, %d failed", label, len(self.checks), len(failed))
        return report

    # ===== core =====

    def check_core(self):
        t = self.tols
        eig = np.sort(np.linalg.eigvalsh(METRIC))
        self._record("metric_signature", "core", np.abs(eig - np.array([-1.0, 1.0, 1.0])), 1e-15)
        self._record("lightlike_direction", "core", [norm_squared(LIGHTLIKE_DIRECTION)], 0.0)

        pts = self.rng.normal(size=(20, 3))
        params = self.rng.uniform(-3, 3, size=(20, 2))
        group, isometry, inverse, fixed, cross = [], [], [], [], []
        for (a, b), p, q in zip(params, pts, np.roll(pts, 1, axis=0)):
            ga, gb = ParabolicIsometry(a), ParabolicIsometry(b)
            scale = max(1.0, float(np.linalg.norm(p))) ** 2 * max(1.0, a * a, b * b)
            group.append(np.max(np.abs(ga.apply(gb.apply(p)).as_array() - compose(ga, gb).apply(p).as_array())) / scale)
            inverse.append(np.max(np.abs(ga.inverse().apply(ga.apply(p)).as_array() - p)) / scale)
            isometry.append(abs(inner(ga.apply(p), ga.apply(q)) - inner(p, q)) / (scale * max(1.0, float(np.linalg.norm(q))) ** 2))
            fixed.append(np.max(np.abs(ga.apply(LIGHTLIKE_DIRECTION).as_array() - LIGHTLIKE_DIRECTION.as_array())))
            c = cross_array(p, q)
            cross.append(max(abs(inner(c, p)), abs(inner(c, q))) / max(1.0, float(np.linalg.norm(p) * np.linalg.norm(q))) ** 2)
        self._record("group_law", "A3", group, 1e-13)
        self._record("group_inverse", "A3", inverse, 1e-13)
        self._record("group_isometry", "A3", isometry, 1e-13)
        self._record("group_fixes_lightlike_direction", "A3", fixed, 0.0)
        self._record("cross_product_orthogonality", "core", cross, 1e-13)

        inv = self.settings.tolerances
        vs = -np.logspace(-6, 6, 121)
        vs = np.concatenate([vs, np.linspace(-0.5, -0.125, 31)])
        round_trip = []
        for v in vs:
            try:
                r = phi_inverse(float(v), inv.phi_inverse, inv.phi_inverse_max_iter)
                round_trip.append(abs(phi(r) - v) / max(1.0, abs(v)))
            except SolitonError as e:
                logger.warning("phi_inverse(%g): %s", v, e)
                round_trip.append(math.inf)
        self._record("phi_round_trip", "phi", round_trip, t.phi_round_trip)

        rs = np.linspace(-6.0, 12.0, 721)
        values = np.array([phi(r) for r in rs])
        steps = np.minimum(np.diff(values), 0.0)
        self._record(
            "phi_monotone", "phi", list(steps) + [min(phi_prime(r), 0.0) for r in rs], 1e-15,
            detail="negative increments of phi and negative values of phi'",
        )
        identity = [abs(phi_printed(r) + 4 * math.exp(-2.0) * phi(r - 1)) / max(1.0, abs(phi_printed(r))) for r in rs]
        self._record("phi_printed_identity", "phi", identity, 1e-13)

    # ===== graph families =====

    def check_graph_family(self, family: GraphSolitonFamily):
        t = self.tols
        label = family_label(family)
        points = _grid(graph_sample_box(family), t.grid_points)
        patch = family.patch()
        expected_causal = family.causal_character()

        pde, uyz, flat, hw, causal, disc_rel, normal = [], [], [], [], [], [], []
        for y, z in points:
            if not family.contains(y, z):
                continue
            d = family.partials_u(y, z)
            pde.append(family.pde_residual(y, z) / family.pde_scale(y, z))
            uyz.append(d.u_yz)
            ff = fundamental_forms(patch, (y, z), self.settings.tolerances.degeneracy)
            flat.append(ff.K)
            hw.append(ff.H * ff.W + 1.0)
            sign = CausalCharacter.SPACELIKE if ff.disc > 0 else CausalCharacter.TIMELIKE
            causal.append(0.0 if (sign is expected_causal and ff.eps == (-1 if ff.disc > 0 else 1)) else 1.0)
            disc_rel.append((ff.disc + ff.eps * ff.W**2) / ff.W**2)
            fy, fz = patch.first_partials(y, z)
            n = ff.N.as_array()
            n_size = max(1.0, float(np.linalg.norm(n)))
            t_size = max(1.0, float(np.linalg.norm(fy)), float(np.linalg.norm(fz)))
            normal.append(max(abs(inner(n, fy)), abs(inner(n, fz))) / (n_size * t_size))
            normal.append(abs(inner(n, n) - ff.eps) / n_size**2)

        self._record("pde_residual", label, pde, self._residual_tol(t.pde_residual), "relative to the largest PDE term")
        self._record("translation_surface", label, uyz, 0.0, "u_yz")
        self._record("flatness", label, flat, t.flatness, "K")
        self._record("mean_curvature_identity", label, hw, t.mean_curvature, "H W + 1")
        self._record("causal_character", label, causal, 0.0, f"expected {expected_causal.value}")
        self._record("discriminant_identity", label, disc_rel, t.normal, "(disc + eps W^2) / W^2")
        self._record("normal_orthogonality", label, normal, t.normal)

        self.check_finite_differences(family, points)
        self.check_christoffel(family)

    def check_finite_differences(self, family: GraphSolitonFamily, points: Sequence[Tuple[float, float]]):
        errors = []
        for y, z in points[:: max(1, len(points) // 40)]:
            if family.domain.boundary_distance(y, z) < FD_INTERIOR:
                continue
            num = numeric_partials(lambda a, b: family.eval_u(a, b), (y, z), self.settings.tolerances.fd_step, family.domain)
            d = family.partials_u(y, z)
            analytic = np.array([d.u_y, d.u_z, d.u_yy, d.u_yz, d.u_zz])
            numeric = np.array([num.p, num.q, num.pp, num.pq, num.qq], dtype=float)
            scale = max(1.0, abs(family.eval_u(y, z)), float(np.max(np.abs(analytic))))
            errors.append(float(np.max(np.abs(analytic - numeric))) / scale)
        self._record("finite_difference_partials", family_label(family), errors, self.tols.finite_difference)

    def check_christoffel(self, family: GraphSolitonFamily):
        metric = InducedMetric.from_graph_family(family, self.settings.tolerances.degeneracy)
        (y0, y1), (z0, z1) = graph_sample_box(family)
        errors = []
        for _ in range(self.tols.christoffel_points):
            y, z = self.rng.uniform(y0, y1), self.rng.uniform(z0, z1)
            got = np.array(christoffel(metric, (y, z)).as_tensor())
            want = expected_christoffel(family, z).as_tensor()
            errors.append(float(np.max(np.abs(got - want))) / max(1.0, float(np.max(np.abs(want)))))
        self._record("christoffel_closed_form", family_label(family), errors, self.tols.christoffel)

    def check_witness_length(self, family: GraphSolitonFamily):
        w = check_witness(family, self.settings.probe, self.settings.tolerances.degeneracy)
        self._record(
            "witness_length", family_label(family),
            [w.limit_length - w.expected_length], self.tols.witness_length * max(1.0, w.expected_length),
            detail=f"{w.kind.value} {w.description}: limit {w.limit_length:.12g}, expected {w.expected_length:.12g}",
        )
        if w.kind.value == "geodesic":
            self._record("witness_is_geodesic", family_label(family), [w.max_geodesic_residual], 1e-8)

    def check_first_integral(self, family: GraphSolitonFamily):
        """Drift of I(a', a') along an integrated geodesic, relative to the size of its terms."""
        metric = InducedMetric.from_graph_family(family, self.settings.tolerances.degeneracy)
        start = [0.0, family.z0, 0.3, 1.0] if family.kind is FamilyKind.TYPE_I else [0.0, family.z0, -0.5, 0.7]
        traj = integrate_geodesic(metric, start, 10.0, self.settings.integrator)
        drift = traj.speed_drift(metric)
        self._record(
            "geodesic_first_integral", family_label(family), drift, self.tols.first_integral,
            detail=f"verdict {traj.verdict.value} at t={traj.t[-1]:.6g}",
        )

    # ===== parabolic profiles =====

    def check_parabolic_profile(self, profile: ParabolicProfile):
        t = self.tols
        label = family_label(profile)
        surface = sweep_surface(profile)
        patch = surface.patch()
        width = profile.s_max - profile.s_min
        ss = [float(s) for s in np.linspace(profile.s_min + 0.01 * width, profile.s_max - 0.01 * width, t.grid_points)]
        ss = [s for s in ss if profile.contains(s)]
        ts = [float(v) for v in np.linspace(-2.0, 2.0, t.grid_points)]
        t_shift = 0.7

        ode = [profile.ode_residual(s) / profile.ode_scale(s) for s in ss]
        self._record("profile_ode_residual", label, ode, self._residual_tol(t.ode_residual))

        sweep, invariance, first, causal = [], [], [], []
        for s in ss:
            E_c, F_c, G_c = surface.first_form_closed(s)
            for tt in ts:
                ff = fundamental_forms(patch, (s, tt), self.settings.tolerances.degeneracy)
                sweep.append(soliton_residual(patch, (s, tt)) / max(1.0, abs(ff.H)))
                moved = surface.orbit_shift(s, tt, t_shift).as_array()
                target = surface.position(s, tt + t_shift)
                invariance.append(float(np.max(np.abs(moved - target))) / max(1.0, float(np.max(np.abs(target)))))
                scale = max(1.0, abs(ff.E), abs(ff.F), abs(ff.G))
                first.append(max(abs(ff.E - E_c), abs(ff.F - F_c), abs(ff.G - G_c)) / scale)
                causal.append(0.0 if (ff.eps == profile.eps and (ff.disc > 0) == (profile.eps < 0)) else 1.0)

        self._record("sweep_soliton_residual", label, sweep, self._residual_tol(t.sweep_residual), "(H - <K, N>) / max(1, |H|)")
        self._record("parabolic_invariance", label, invariance, t.invariance, f"t' = {t_shift}")
        self._record("sweep_first_form", label, first, 1e-12, "(E, F, G) = (-2 x' y', 0, y^2)")
        self._record("sweep_causal_character", label, causal, 0.0, f"expected {profile.causal_character().value}")

        if profile.case is ProfileCase.EXPLICIT_X_OF_S and profile.s_min > 0:
            self.check_singular_limit(profile)

    def check_singular_limit(self, profile: ParabolicProfile):
        near = ParabolicProfile(profile.case, 1e-9, profile.s_max, a0=profile.a0, a1=profile.a1)
        s_values = [10.0**-k for k in range(1, 7)]
        devs = sweep_surface(near).singular_limit_deviations(s_values, t=1.0)
        increases = [max(0.0, b - a) for a, b in zip(devs, devs[1:])]
        self._record(
            "singular_limit", family_label(profile), increases + [devs[-1]], 1e-5,
            detail="deviation from (a0 + a1, 0, 0) along s = 1e-1 ... 1e-6 must shrink monotonically",
        )
