import math

import numpy as np
import pandas as pd
import pytest

from lightlike_solitons import __version__
from lightlike_solitons.descriptors import describe
from lightlike_solitons.errors import DescriptorError, OutOfDomainError
from lightlike_solitons.exporters import dump_json, frame_to_csv, mesh_to_obj, write_csv, write_obj
from lightlike_solitons.families import FamilyKind, GraphSolitonFamily
from lightlike_solitons.grid import (
    GRAPH_COLUMNS,
    PARABOLIC_COLUMNS,
    build_mesh,
    default_grid,
    evaluate_family_grid,
    mesh_shift_deviation,
    parse_grid,
)
from lightlike_solitons.parabolic import ParabolicProfile, ProfileCase

PROFILE = ParabolicProfile(ProfileCase.EXPLICIT_X_OF_S, 0.1, 3.0, a0=1.0, a1=0.0)


# ===== grid parsing =====


def test_parse_grid():
    grid = parse_grid(" -1:1:3 , -2:2:5 ", margin=0.1)
    assert (grid.p_min, grid.p_max, grid.p_count) == (-1.0, 1.0, 3)
    assert grid.q_values().tolist() == [-2.0, -1.0, 0.0, 1.0, 2.0]
    assert grid.margin == 0.1


@pytest.mark.parametrize(
    "text",
    ["", "0:1:3", "0:1:3,0:1", "a:1:3,0:1:3", "0:1:2.5,0:1:3", "1:0:3,0:1:3", "0:1:1,0:1:3", "0:inf:3,0:1:3"],
)
def test_parse_grid_rejects(text):
    with pytest.raises(DescriptorError):
        parse_grid(text)


def test_default_grid(type_iii):
    grid = default_grid(type_iii)
    assert grid.p_count == grid.q_count == 5
    assert -math.pi < grid.q_min < grid.q_max < math.pi
    profile_grid = default_grid(PROFILE, count=3)
    assert PROFILE.s_min < profile_grid.p_min < profile_grid.p_max < PROFILE.s_max


# ===== evaluation =====


def test_graph_grid(type_i):
    frame = evaluate_family_grid(type_i, parse_grid("-1:1:3,-1:1:3"))
    assert list(frame.columns) == GRAPH_COLUMNS
    assert len(frame) == 9
    assert frame[["y", "z"]].iloc[1].tolist() == [-1.0, 0.0]
    assert np.all(np.abs(frame["residual"]) < 1e-12)
    assert np.allclose(frame["K"], 0.0, atol=1e-8)
    assert np.allclose(frame["H"] * frame["W"], -1.0, atol=1e-9)
    assert frame["u"].iloc[4] == pytest.approx(type_i.eval_u(0.0, 0.0))


def test_points_outside_the_strip_are_nan(type_iii):
    frame = evaluate_family_grid(type_iii, parse_grid("-1:1:2,-4:4:3"))
    outside = frame["u"].isna()
    assert outside.tolist() == [True, False, True, True, False, True]
    assert frame.loc[outside, "z"].abs().tolist() == [4.0] * 4
    assert frame.loc[~outside, ["H", "K", "W", "residual"]].notna().all().all()


def test_margin_excludes_points(type_iv):
    grid = parse_grid("0:1:2,0.05:1:2", margin=0.1)
    frame = evaluate_family_grid(type_iv, grid)
    assert frame["u"].isna().tolist() == [True, False, True, False]


def test_family_margin_is_a_floor():
    family = GraphSolitonFamily(FamilyKind.TYPE_IV, lam=1.0, margin=0.2)
    frame = evaluate_family_grid(family, parse_grid("0:1:2,0.1:1:2", margin=0.0))
    assert frame["u"].isna().tolist() == [True, False, True, False]
    wider = evaluate_family_grid(family, parse_grid("0:1:2,0.1:1:2", margin=2.0))
    assert wider["u"].isna().all()


def test_parabolic_grid():
    frame = evaluate_family_grid(PROFILE, parse_grid("0.5:2.5:3,-1:1:3"))
    assert list(frame.columns) == PARABOLIC_COLUMNS
    assert frame["residual"].abs().max() < 1e-8
    assert np.allclose(frame["y"], frame["s"])
    assert np.allclose(frame["z"], frame["t"] * frame["y"])


# ===== meshes =====


def test_mesh_triangulation(type_i):
    mesh = build_mesh(type_i, parse_grid("-1:1:2,-1:1:2"))
    assert mesh.vertices.shape == (4, 3)
    assert mesh.faces.tolist() == [[0, 2, 3], [0, 3, 1]]
    assert mesh.vertices[0].tolist() == pytest.approx([type_i.eval_u(-1.0, -1.0), -1.0, -1.0])
    assert list(mesh.to_frame().columns) == ["p", "q", "x", "y", "z"]


def test_mesh_drops_quads_across_the_boundary(type_iii):
    mesh = build_mesh(type_iii, parse_grid("-1:1:2,0:4:2"))
    assert len(mesh.vertices) == 2
    assert mesh.faces.shape == (0, 3)


def test_mesh_outside_domain(type_iv):
    with pytest.raises(OutOfDomainError):
        build_mesh(type_iv, parse_grid("-1:1:2,-2:-1:2"))


def test_mesh_commutes_with_parabolic_group():
    deviation = mesh_shift_deviation(PROFILE, parse_grid("0.5:2.5:4,-1:1:4"), 0.7)
    assert deviation is not None
    assert deviation < 1e-10


# ===== exporters =====


def test_csv_format():
    frame = pd.DataFrame({"a": [1.0, math.nan], "b": [0.1, 2.0]})
    lines = frame_to_csv(frame).split("\n")
    assert lines[0] == f"# lightlike-solitons {__version__}"
    assert lines[1:4] == ["a,b", "1,0.10000000000000001", ",2"]


def test_obj_format(type_i):
    mesh = build_mesh(type_i, parse_grid("-1:1:2,-1:1:2"))
    lines = mesh_to_obj(mesh, name="type_i").splitlines()
    assert lines[1] == "o type_i"
    assert sum(line.startswith("v ") for line in lines) == 4
    assert lines[-2:] == ["f 1 3 4", "f 1 4 2"]


def test_atomic_write_is_reproducible(tmp_path, type_i):
    frame = evaluate_family_grid(type_i, parse_grid("-1:1:3,-1:1:3"))
    out = tmp_path / "nested" / "grid.csv"
    text = write_csv(frame, out)
    first = out.read_bytes()
    write_csv(evaluate_family_grid(type_i, parse_grid("-1:1:3,-1:1:3")), out)
    assert out.read_bytes() == first == text.encode("utf-8")
    assert not list(tmp_path.rglob("*.tmp"))

    obj = tmp_path / "mesh.obj"
    write_obj(build_mesh(type_i, parse_grid("-1:1:2,-1:1:2")), obj)
    assert obj.read_text(encoding="utf-8").startswith("# lightlike-solitons")


def test_dump_json_of_models(type_ii):
    text = dump_json([describe(type_ii)])
    assert text.endswith("\n")
    assert '"kind": "type_ii"' in text
