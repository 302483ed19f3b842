"""
Rectangular parameter grids, pointwise evaluation tables and triangle meshes.

Graph families are sampled over (y, z); parabolic profiles over (s, t), with
the sweep psi(s, t) = (x + t^2 y / 2, y, t y). Grid points outside the domain
(or within ``margin`` of its boundary) produce NaN rows and no mesh vertex.
"""

from dataclasses import dataclass
from functools import partial
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, ValidationError, model_validator

from lightlike_solitons.descriptors import Family
from lightlike_solitons.errors import DescriptorError, OutOfDomainError, SolitonError
from lightlike_solitons.families import FamilyKind, GraphSolitonFamily, Half
from lightlike_solitons.parabolic import ParabolicProfile, sweep_surface
from lightlike_solitons.surface_geometry import DEFAULT_DEGENERACY_TOL, fundamental_forms, soliton_residual

logger = logging.getLogger(__name__)

GRAPH_COLUMNS = ["y", "z", "u", "H", "K", "W", "residual"]
PARABOLIC_COLUMNS = ["s", "t", "x", "y", "z", "H", "K", "W", "residual"]
STRIP_MARGIN = 1e-3


class GridSpec(BaseModel):
    """
    Tensor grid p_range x q_range, both ranges inclusive.

    ``margin`` widens the boundary exclusion of the family being evaluated; the
    family's own ``margin`` stays a floor, so a smaller value here never admits
    points the family itself rejects.
    """

    p_min: float
    p_max: float
    p_count: int = Field(ge=2)
    q_min: float
    q_max: float
    q_count: int = Field(ge=2)
    margin: float = Field(0.0, ge=0)

    @model_validator(mode="after")
    def _ordered(self):
        for lo, hi, name in ((self.p_min, self.p_max, "first"), (self.q_min, self.q_max, "second")):
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"{name} range needs finite min < max, got {lo}:{hi}")
        return self

    def p_values(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.p_count)

    def q_values(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.q_count)


def parse_grid(text: str, margin: float = 0.0) -> GridSpec:
    """
    Parse "pmin:pmax:np,qmin:qmax:nq", e.g. "-1:1:3,-2:2:5".

    Raises:
        DescriptorError: wrong shape, non-numeric entries, counts < 2 or empty ranges
    """
    parts = [p.strip() for p in (text or "").split(",")]
    if len(parts) != 2:
        raise DescriptorError(f"grid must look like 'ymin:ymax:ny,zmin:zmax:nz', got {text!r}")
    fields = []
    for part in parts:
        pieces = part.split(":")
        if len(pieces) != 3:
            raise DescriptorError(f"grid range must be min:max:count, got {part!r}")
        try:
            lo, hi = float(pieces[0]), float(pieces[1])
            count = int(pieces[2])
        except ValueError as e:
            raise DescriptorError(f"grid range {part!r} is not numeric") from e
        fields.append((lo, hi, count))
    try:
        return GridSpec(
            p_min=fields[0][0], p_max=fields[0][1], p_count=fields[0][2],
            q_min=fields[1][0], q_max=fields[1][1], q_count=fields[1][2],
            margin=margin,
        )
    except ValidationError as e:
        raise DescriptorError(f"invalid grid {text!r}: {e.errors()[0]['msg']}") from e


def graph_sample_box(family: GraphSolitonFamily) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """(y-range, z-range) sampled for a graph family; strips keep STRIP_MARGIN from their edges."""
    lam, z0 = family.lam, family.z0
    if family.kind is FamilyKind.TYPE_II:
        z_range = (z0 - 4.0, z0 + 4.0)
    elif family.kind is FamilyKind.TYPE_III:
        lo, hi = family.strip_bounds()
        z_range = (lo + STRIP_MARGIN, hi - STRIP_MARGIN)
    elif family.kind is FamilyKind.TYPE_IV:
        z_range = (z0 + STRIP_MARGIN, z0 + 4 * lam) if family.half is Half.PLUS else (z0 - 4 * lam, z0 - STRIP_MARGIN)
    else:
        z_range = (z0 - 4 * lam, z0 + 4 * lam)
    return (-2.0, 2.0), z_range


def default_grid(family: Family, count: int = 5, margin: float = 0.0) -> GridSpec:
    """Grid used when --grid is omitted: the graph sample box, or J x [-2, 2] for profiles."""
    if isinstance(family, GraphSolitonFamily):
        (p0, p1), (q0, q1) = graph_sample_box(family)
    else:
        width = family.s_max - family.s_min
        (p0, p1), (q0, q1) = (family.s_min + 0.01 * width, family.s_max - 0.01 * width), (-2.0, 2.0)
    return GridSpec(p_min=p0, p_max=p1, p_count=count, q_min=q0, q_max=q1, q_count=count, margin=margin)


def _in_domain(family: Family, p: float, q: float, margin: float) -> bool:
    """Domain test with exclusion max(margin, family.margin)."""
    if isinstance(family, GraphSolitonFamily):
        return family.contains(p, q, max(margin, family.margin))
    return family.domain.contains(p, q, max(margin, family.margin))


def _graph_row(family: GraphSolitonFamily, patch, tol: float, y: float, z: float) -> List[float]:
    ff = fundamental_forms(patch, (y, z), tol)
    residual = family.pde_residual(y, z) / family.pde_scale(y, z)
    return [y, z, family.eval_u(y, z), ff.H, ff.K, ff.W, residual]


def _parabolic_row(surface, patch, tol: float, s: float, t: float) -> List[float]:
    ff = fundamental_forms(patch, (s, t), tol)
    x, y, z = surface.position(s, t)
    return [s, t, x, y, z, ff.H, ff.K, ff.W, soliton_residual(patch, (s, t), tol=tol)]


def evaluate_family_grid(family: Family, grid: GridSpec, tol: float = DEFAULT_DEGENERACY_TOL) -> pd.DataFrame:
    """
    One row per grid point in row-major (p outer, q inner) order.

    Graph families give columns y, z, u, H, K, W, residual where residual is
    the PDE left-hand side divided by its largest term; parabolic profiles give
    s, t, x, y, z, H, K, W, residual with residual = H - <K, N>. Points outside
    the domain keep their coordinates and carry NaN elsewhere. A point is
    outside when it lies within max(grid.margin, family.margin) of the boundary.
    """
    graph = isinstance(family, GraphSolitonFamily)
    columns = GRAPH_COLUMNS if graph else PARABOLIC_COLUMNS
    if graph:
        row_of = partial(_graph_row, family, family.patch(), tol)
    else:
        surface = sweep_surface(family)
        row_of = partial(_parabolic_row, surface, surface.patch(), tol)

    rows, skipped = [], 0
    for p in grid.p_values():
        for q in grid.q_values():
            p, q = float(p), float(q)
            row = None
            if _in_domain(family, p, q, grid.margin):
                try:
                    row = row_of(p, q)
                except SolitonError as e:
                    logger.debug("(%g, %g): %s", p, q, e)
            if row is None:
                skipped += 1
                row = [p, q] + [math.nan] * (len(columns) - 2)
            rows.append(row)
    if skipped:
        logger.info("%d of %d grid points outside the domain", skipped, len(rows))
    return pd.DataFrame(rows, columns=columns)


@dataclass(frozen=True)
class Mesh:
    """
    Triangle mesh over the in-domain grid vertices.

    Attributes:
        vertices: (n, 3) embedded points (x, y, z)
        params: (n, 2) parameter values of each vertex
        faces: (m, 3) zero-based vertex indices
    """

    vertices: np.ndarray
    params: np.ndarray
    faces: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "p": self.params[:, 0],
                "q": self.params[:, 1],
                "x": self.vertices[:, 0],
                "y": self.vertices[:, 1],
                "z": self.vertices[:, 2],
            }
        )


def _embedding(family: Family):
    if isinstance(family, GraphSolitonFamily):
        return lambda y, z: np.array([family.eval_u(y, z), y, z])
    return sweep_surface(family).position


def build_mesh(family: Family, grid: GridSpec) -> Mesh:
    """
    Quad mesh of the grid split along the (i, j)-(i+1, j+1) diagonal.

    Only quads with all four corners in the domain are kept, so quads
    straddling a strip boundary or singular line are dropped.

    Raises:
        OutOfDomainError: no grid point lies in the domain
    """
    embed = _embedding(family)
    ps, qs = grid.p_values(), grid.q_values()
    index = -np.ones((len(ps), len(qs)), dtype=int)
    vertices: List[np.ndarray] = []
    params: List[Tuple[float, float]] = []

    for i, p in enumerate(ps):
        for j, q in enumerate(qs):
            if not _in_domain(family, float(p), float(q), grid.margin):
                continue
            try:
                v = embed(float(p), float(q))
            except SolitonError:
                continue
            index[i, j] = len(vertices)
            vertices.append(np.asarray(v, dtype=float))
            params.append((float(p), float(q)))

    if not vertices:
        raise OutOfDomainError("no grid point lies inside the domain")

    faces = []
    for i in range(len(ps) - 1):
        for j in range(len(qs) - 1):
            a, b, c, d = index[i, j], index[i + 1, j], index[i + 1, j + 1], index[i, j + 1]
            if min(a, b, c, d) < 0:
                continue
            faces.append((a, b, c))
            faces.append((a, c, d))

    logger.info("mesh: %d vertices, %d triangles", len(vertices), len(faces))
    return Mesh(np.array(vertices), np.array(params), np.array(faces, dtype=int).reshape(-1, 3))


def mesh_shift_deviation(profile: ParabolicProfile, grid: GridSpec, t_shift: float) -> Optional[float]:
    """
    Largest distance between the mesh over the t-range shifted by ``t_shift``
    and the image of the unshifted mesh under the parabolic isometry.

    Returns None when the meshes do not have the same vertex count.
    """
    shifted = grid.model_copy(update={"q_min": grid.q_min + t_shift, "q_max": grid.q_max + t_shift})
    base, moved = build_mesh(profile, grid), build_mesh(profile, shifted)
    if base.vertices.shape != moved.vertices.shape:
        return None
    surface = sweep_surface(profile)
    image = np.array([surface.orbit_shift(s, t, t_shift).as_array() for s, t in base.params])
    return float(np.max(np.abs(image - moved.vertices)))
