import math

import numpy as np
import pytest

from lightlike_solitons.errors import DegenerateMetricError, OutOfDomainError, StencilOutOfDomainError
from lightlike_solitons.minkowski import inner
from lightlike_solitons.surface_geometry import (
    DomainKind,
    DomainSpec,
    PartialsKind,
    SurfacePatch,
    curvatures,
    first_form,
    fundamental_forms,
    graph_patch,
    numeric_partials,
    principal_curvatures,
    shape_operator,
    soliton_residual,
    unit_normal,
)

POINTS = [(0.0, 0.0), (-1.0, 0.7), (1.5, -2.0), (0.3, 3.1)]


def _linear_graph(slope_y: float, slope_z: float) -> SurfacePatch:
    return graph_patch(
        lambda y, z: slope_y * y + slope_z * z,
        lambda y, z: (slope_y, slope_z, 0.0, 0.0, 0.0),
        DomainSpec.full_plane(),
    )


# ===== domains =====


def test_domain_shapes():
    strip = DomainSpec.horizontal_strip(-1.0, 1.0)
    assert strip.kind is DomainKind.HORIZONTAL_STRIP
    assert strip.contains(100.0, 0.5)
    assert not strip.contains(0.0, 1.0)
    assert not strip.contains(0.0, 0.99, margin=0.02)
    assert strip.boundary_distance(0.0, 0.25) == pytest.approx(0.75)

    half = DomainSpec.half_plane(2.0, upper=False)
    assert half.contains(0.0, 1.0)
    assert not half.contains(0.0, 2.0)
    assert not half.contains(0.0, 3.0)

    box = DomainSpec.interval_product((0.0, 3.0), excluded_p=(1.0,))
    assert box.contains(0.5, -40.0)
    assert not box.contains(1.0, 0.0)
    assert not DomainSpec.full_plane().contains(math.nan, 0.0)


def test_domain_rejects_empty_interval():
    with pytest.raises(ValueError):
        DomainSpec.horizontal_strip(1.0, 1.0)


# ===== finite differences =====


def test_numeric_partials_of_quadratic():
    d = numeric_partials(lambda p, q: p * p + 3 * p * q - q * q, (0.4, -0.8))
    assert float(d.p) == pytest.approx(2 * 0.4 + 3 * -0.8, abs=1e-8)
    assert float(d.q) == pytest.approx(3 * 0.4 + 1.6, abs=1e-8)
    assert float(d.pp) == pytest.approx(2.0, abs=1e-5)
    assert float(d.pq) == pytest.approx(3.0, abs=1e-5)
    assert float(d.qq) == pytest.approx(-2.0, abs=1e-5)


def test_central_differences_converge_at_second_order(type_iv):
    at = (0.0, 1.0)
    exact = type_iv.partials_u(*at).u_z
    steps = np.array([1e-2, 1e-3, 1e-4])
    errors = np.array([abs(float(numeric_partials(type_iv.eval_u, at, h, type_iv.domain).q) - exact) for h in steps])
    slope = np.polyfit(np.log(steps), np.log(errors), 1)[0]
    assert 1.8 <= slope <= 2.2


def test_stencil_must_stay_in_domain():
    strip = DomainSpec.horizontal_strip(0.0, 1.0)
    with pytest.raises(StencilOutOfDomainError):
        numeric_partials(lambda p, q: p + q, (0.0, 1e-6), domain=strip)


# ===== first fundamental form =====


def test_first_form_of_linear_graph():
    E, F, G, disc = first_form(_linear_graph(-1.0, 0.0), (0.3, 0.2))
    assert (E, F, G, disc) == (2.0, 0.0, 1.0, 2.0)


def test_degenerate_plane_raises():
    # x = 0 contains the light-like direction y
    with pytest.raises(DegenerateMetricError):
        first_form(_linear_graph(0.0, 0.0), (0.0, 0.0))


def test_point_outside_domain_raises():
    patch = graph_patch(lambda y, z: 0.0, lambda y, z: (-1.0, 0.0, 0.0, 0.0, 0.0), DomainSpec.half_plane(0.0))
    with pytest.raises(OutOfDomainError):
        first_form(patch, (0.0, -1.0))


# ===== normal and curvatures =====


def test_unit_normal_of_graph(type_i):
    patch = type_i.patch()
    for y, z in POINTS:
        N, W, eps = unit_normal(patch, (y, z))
        d = type_i.partials_u(y, z)
        expected = np.array([-d.u_y, 1.0, d.u_z]) / W
        assert np.allclose(N.as_array(), expected, atol=1e-12)
        assert inner(N, N) == pytest.approx(eps, abs=1e-12)
        fy, fz = patch.first_partials(y, z)
        assert inner(N, fy) == pytest.approx(0.0, abs=1e-12)
        assert inner(N, fz) == pytest.approx(0.0, abs=1e-12)


def test_spacelike_patch_has_timelike_normal(type_i, type_iii):
    ff = fundamental_forms(type_i.patch(), (0.0, 0.5))
    assert ff.disc > 0 and ff.eps == -1
    ff = fundamental_forms(type_iii.patch(), (0.0, 0.5))
    assert ff.disc < 0 and ff.eps == 1


def test_discriminant_equals_minus_eps_w_squared(type_i, type_iv):
    for family in (type_i, type_iv):
        ff = fundamental_forms(family.patch(), (0.2, 1.3))
        assert ff.disc == pytest.approx(-ff.eps * ff.W**2, rel=1e-12)


def test_graph_solitons_are_flat_with_hw_minus_one(type_i, type_ii, type_iii, type_iv):
    for family in (type_i, type_ii, type_iii, type_iv):
        patch = family.patch()
        for y, z in [(0.0, 0.5), (-1.0, 1.2), (1.0, 0.3)]:
            H, K = curvatures(patch, (y, z))
            ff = fundamental_forms(patch, (y, z))
            assert K == pytest.approx(0.0, abs=1e-9)
            assert H * ff.W == pytest.approx(-1.0, abs=1e-9)
            assert soliton_residual(patch, (y, z)) == pytest.approx(0.0, abs=1e-9)


def test_shape_operator_trace_is_mean_curvature(type_i):
    patch = type_i.patch()
    A = shape_operator(patch, (0.4, -0.6))
    H, K = curvatures(patch, (0.4, -0.6))
    assert np.trace(A) == pytest.approx(H, rel=1e-12)
    assert np.linalg.det(A) == pytest.approx(K, abs=1e-12)


def test_principal_curvatures_of_flat_surface(type_i):
    vals = principal_curvatures(type_i.patch(), (0.0, 0.8))
    assert np.isrealobj(vals)
    assert abs(vals[0] * vals[1]) < 1e-10


@pytest.mark.parametrize("z", [-3.0, -0.5, 0.0, 1.2, 4.0])
def test_type_i_principal_curvatures(type_i, z):
    w = (z - type_i.z0) / (2 * type_i.lam)
    vals = principal_curvatures(type_i.patch(), (0.7, z))
    assert np.isrealobj(vals)
    assert vals[0] == pytest.approx(-math.cosh(w) / (2 * type_i.lam), rel=1e-9)
    assert vals[1] == pytest.approx(0.0, abs=1e-9 * math.cosh(w))


def test_type_i_curvature_grows_away_from_the_axis(type_i):
    largest = []
    for half_width in (5.0, 10.0, 20.0):
        vals = principal_curvatures(type_i.patch(), (0.0, half_width))
        largest.append(float(np.max(np.abs(vals))))
        w = half_width / (2 * type_i.lam)
        assert largest[-1] == pytest.approx(math.cosh(w) / (2 * type_i.lam), rel=1e-5)
    assert largest[0] < largest[1] < largest[2]
    assert largest[2] / largest[1] == pytest.approx(math.cosh(5.0) / math.cosh(2.5), rel=1e-4)


def test_finite_difference_patch_matches_analytic(type_i):
    analytic = type_i.patch()
    numeric = SurfacePatch.from_position(analytic.position, analytic.domain)
    assert numeric.partials_kind is PartialsKind.FINITE_DIFFERENCE
    for at in [(0.0, 0.5), (1.0, -1.0)]:
        a, n = fundamental_forms(analytic, at), fundamental_forms(numeric, at)
        assert n.E == pytest.approx(a.E, abs=1e-6)
        assert n.F == pytest.approx(a.F, abs=1e-6)
        assert n.H == pytest.approx(a.H, abs=1e-4)


def test_translation_keeps_geometry(type_ii):
    patch = type_ii.patch()
    moved = patch.translated((3.0, -1.0, 2.0))
    for at in POINTS:
        assert np.allclose(moved.position(*at) - patch.position(*at), [3.0, -1.0, 2.0])
        assert curvatures(moved, at) == curvatures(patch, at)
