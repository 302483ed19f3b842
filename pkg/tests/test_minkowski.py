import math

import numpy as np
import pytest

from lightlike_solitons.errors import InvalidParamError
from lightlike_solitons.minkowski import (
    LIGHTLIKE_DIRECTION,
    CausalCharacter,
    LorentzVector,
    ParabolicIsometry,
    apply_isometry,
    causal_character,
    compose,
    inner,
    minkowski_cross,
    norm_squared,
)
from lightlike_solitons.surface_geometry import unit_normal

rng = np.random.default_rng(11)


def test_basis_products():
    x, y, z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert inner(x, y) == -1.0
    assert inner(x, x) == 0.0
    assert inner(y, y) == 0.0
    assert inner(z, z) == 1.0
    assert inner(x, z) == 0.0


def test_inner_is_symmetric_and_bilinear():
    u, v, w = rng.normal(size=(3, 3))
    assert inner(u, v) == pytest.approx(inner(v, u), abs=1e-15)
    assert inner(2 * u + w, v) == pytest.approx(2 * inner(u, v) + inner(w, v), abs=1e-13)


def test_causal_character():
    assert causal_character((1, 0, 0)) is CausalCharacter.LIGHTLIKE
    assert causal_character((0, 0, 1)) is CausalCharacter.SPACELIKE
    assert causal_character((1, 1, 0)) is CausalCharacter.TIMELIKE
    assert causal_character((0, 0, 0)) is CausalCharacter.ZERO
    assert norm_squared(LIGHTLIKE_DIRECTION) == 0.0


def test_causal_character_rejects_negative_tolerance():
    with pytest.raises(InvalidParamError):
        causal_character((1, 0, 0), tol=-1.0)


def test_vector_rejects_non_finite():
    with pytest.raises(InvalidParamError):
        LorentzVector(math.nan, 0.0, 0.0)


def test_vector_arithmetic():
    a, b = LorentzVector(1.0, 2.0, 3.0), LorentzVector(-1.0, 0.5, 2.0)
    assert (a + b).as_array().tolist() == [0.0, 2.5, 5.0]
    assert (a - b).as_array().tolist() == [2.0, 1.5, 1.0]
    assert (2 * a).as_array().tolist() == [2.0, 4.0, 6.0]
    assert (-a).as_array().tolist() == [-1.0, -2.0, -3.0]


def test_cross_product_represents_determinant():
    for _ in range(10):
        u, v, a = rng.normal(size=(3, 3))
        w = minkowski_cross(u, v)
        det = float(np.linalg.det(np.array([u, v, a])))
        assert inner(w, a) == pytest.approx(det, abs=1e-12)
        assert inner(w, u) == pytest.approx(0.0, abs=1e-12)
        assert inner(w, v) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("at", [(0.0, 0.0), (1.0, -2.5), (-0.4, 3.0)])
def test_normalized_cross_product_is_graph_normal(type_i, at):
    d = type_i.partials_u(*at)
    fy, fz = (d.u_y, 1.0, 0.0), (d.u_z, 0.0, 1.0)
    c = minkowski_cross(fy, fz).as_array()
    c = c / math.sqrt(abs(inner(c, c)))
    if c[1] < 0:
        c = -c
    W = math.sqrt(abs(2 * d.u_y + d.u_z**2))
    assert np.allclose(c, np.array([-d.u_y, 1.0, d.u_z]) / W, atol=1e-12)
    N, _, _ = unit_normal(type_i.patch(), at)
    assert np.allclose(c, N.as_array(), atol=1e-12)


def test_isometry_matrix_agrees_with_apply():
    p = np.array([0.3, -1.2, 2.0])
    g = ParabolicIsometry(1.7)
    assert np.allclose(p @ g.matrix(), g.apply(p).as_array(), atol=1e-14)


def test_isometry_group_laws():
    for a, b in rng.uniform(-3, 3, size=(10, 2)):
        p, q = rng.normal(size=(2, 3))
        ga, gb = ParabolicIsometry(a), ParabolicIsometry(b)
        assert np.allclose(ga.apply(gb.apply(p)).as_array(), compose(ga, gb).apply(p).as_array(), atol=1e-12)
        assert np.allclose(ga.inverse().apply(ga.apply(p)).as_array(), p, atol=1e-12)
        assert inner(ga.apply(p), ga.apply(q)) == pytest.approx(inner(p, q), abs=1e-11)
        assert ga.apply(LIGHTLIKE_DIRECTION) == LIGHTLIKE_DIRECTION


def test_identity_isometry():
    p = LorentzVector(1.0, 2.0, 3.0)
    assert apply_isometry(ParabolicIsometry.identity(), p) == p


def test_isometry_rejects_non_finite_parameter():
    with pytest.raises(InvalidParamError):
        ParabolicIsometry(math.inf)
