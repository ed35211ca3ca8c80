"""Triangle mesh representation, validation and basic measures.

Geometry is in millimeters throughout; volumes are reported in ml
(1000 mm^3 = 1 ml). Meshes are immutable value objects: operations return
new meshes instead of mutating.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyMesh, IndexOutOfRange, NotClosed

MM3_PER_ML = 1000.0

# Triangles below this area (mm^2) are flagged as degenerate but kept.
ZERO_AREA_TOL = 1e-12


@dataclass(frozen=True)
class TriangleMesh:
    """Indexed triangle surface.

    vertices  (n, 3) float64, mm
    triangles (m, 3) int64, indices into vertices
    colors    optional (n, 3) float64 RGB in [0, 1]
    """

    vertices: np.ndarray
    triangles: np.ndarray
    colors: np.ndarray | None = None

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        t = np.ascontiguousarray(np.asarray(self.triangles, dtype=np.int64))
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError(f"vertices must be (n, 3), got {v.shape}")
        if t.size == 0:
            t = t.reshape(0, 3)
        if t.ndim != 2 or t.shape[1] != 3:
            raise ValueError(f"triangles must be (m, 3), got {t.shape}")
        if v.shape[0] > 0 and v.shape[0] < 3 and t.shape[0] > 0:
            raise EmptyMesh("non-empty mesh needs at least 3 vertices")
        if t.shape[0] > 0:
            lo, hi = t.min(), t.max()
            if lo < 0 or hi >= v.shape[0]:
                bad = int(hi if hi >= v.shape[0] else lo)
                raise IndexOutOfRange(
                    f"triangle references vertex {bad} of {v.shape[0]}"
                )
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)
        if self.colors is not None:
            c = np.asarray(self.colors, dtype=np.float64)
            if c.shape != (v.shape[0], 3):
                raise ValueError(f"colors must be (n, 3), got {c.shape}")
            object.__setattr__(self, "colors", c)

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    def triangle_corners(self):
        """(a, b, c) corner position arrays, each (m, 3)."""
        return (
            self.vertices[self.triangles[:, 0]],
            self.vertices[self.triangles[:, 1]],
            self.vertices[self.triangles[:, 2]],
        )

    def triangle_normals(self, normalized: bool = True) -> np.ndarray:
        """Per-triangle normals; zero for degenerate triangles."""
        a, b, c = self.triangle_corners()
        n = np.cross(b - a, c - a)
        if normalized:
            lens = np.linalg.norm(n, axis=1)
            ok = lens > 0
            n[ok] /= lens[ok, None]
        return n

    def triangle_areas(self) -> np.ndarray:
        a, b, c = self.triangle_corners()
        return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)

    def degenerate_triangles(self) -> np.ndarray:
        """Indices of triangles with area below ZERO_AREA_TOL (flagged, kept)."""
        return np.nonzero(self.triangle_areas() < ZERO_AREA_TOL)[0]

    def vertex_normals(self) -> np.ndarray:
        """Area-weighted vertex normals, unit where defined."""
        n = np.zeros_like(self.vertices)
        tn = self.triangle_normals(normalized=False)  # length ~ 2*area
        for k in range(3):
            np.add.at(n, self.triangles[:, k], tn)
        lens = np.linalg.norm(n, axis=1)
        ok = lens > 0
        n[ok] /= lens[ok, None]
        return n

    def bbox(self):
        """(min, max) corners; zeros for an empty mesh."""
        if self.n_vertices == 0:
            return np.zeros(3), np.zeros(3)
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def bbox_diagonal(self) -> float:
        lo, hi = self.bbox()
        return float(np.linalg.norm(hi - lo))

    def transformed(self, rotation=None, translation=None, scale=1.0) -> "TriangleMesh":
        v = self.vertices * float(scale)
        if rotation is not None:
            v = v @ np.asarray(rotation, dtype=np.float64).T
        if translation is not None:
            v = v + np.asarray(translation, dtype=np.float64)
        return TriangleMesh(v, self.triangles.copy(), None if self.colors is None else self.colors.copy())


@dataclass(frozen=True)
class MeshReport:
    """validate_mesh findings."""

    is_manifold: bool
    is_closed: bool
    boundary_edge_count: int
    connected_component_count: int
    bbox: tuple = field(default=((0.0, 0.0, 0.0), (0.0, 0.0, 0.0)))
    degenerate_triangle_count: int = 0


def _edge_counts(triangles: np.ndarray):
    """Undirected edges (sorted pairs) and their incidence counts."""
    e = np.concatenate(
        [triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]], axis=0
    )
    e = np.sort(e, axis=1)
    edges, counts = np.unique(e, axis=0, return_counts=True)
    return edges, counts


def boundary_edges(mesh: TriangleMesh) -> np.ndarray:
    """Edges used by exactly one triangle, as (k, 2) index pairs."""
    if mesh.n_triangles == 0:
        return np.zeros((0, 2), dtype=np.int64)
    edges, counts = _edge_counts(mesh.triangles)
    return edges[counts == 1]


def _component_count(mesh: TriangleMesh) -> int:
    """Connected components among referenced vertices."""
    if mesh.n_triangles == 0:
        return 1 if mesh.n_vertices > 0 else 0
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    t = mesh.triangles
    i = np.concatenate([t[:, 0], t[:, 1], t[:, 2]])
    j = np.concatenate([t[:, 1], t[:, 2], t[:, 0]])
    n = mesh.n_vertices
    adj = coo_matrix((np.ones(i.shape[0]), (i, j)), shape=(n, n))
    n_comp, labels = connected_components(adj, directed=False)
    used = np.unique(t)
    return int(np.unique(labels[used]).size)


def validate_mesh(mesh: TriangleMesh) -> MeshReport:
    """Manifoldness (edge incidence <= 2), closedness (no boundary edges),
    component count and bbox. Degenerate triangles are counted, never removed.
    """
    if mesh.n_triangles == 0:
        lo, hi = mesh.bbox()
        return MeshReport(
            is_manifold=True,
            is_closed=mesh.n_vertices == 0,
            boundary_edge_count=0,
            connected_component_count=1 if mesh.n_vertices > 0 else 0,
            bbox=(tuple(lo), tuple(hi)),
        )
    edges, counts = _edge_counts(mesh.triangles)
    n_boundary = int(np.count_nonzero(counts == 1))
    manifold = bool(counts.max() <= 2)
    lo, hi = mesh.bbox()
    return MeshReport(
        is_manifold=manifold,
        is_closed=n_boundary == 0,
        boundary_edge_count=n_boundary,
        connected_component_count=_component_count(mesh),
        bbox=(tuple(lo), tuple(hi)),
        degenerate_triangle_count=int(len(mesh.degenerate_triangles())),
    )


def signed_volume_mm3(mesh: TriangleMesh) -> float:
    """Signed volume via the divergence theorem (sum of tetra determinants / 6).

    Positive when triangle winding gives outward normals.
    """
    a, b, c = mesh.triangle_corners()
    return float(np.einsum("ij,ij->", a, np.cross(b, c)) / 6.0)


def mesh_volume(mesh: TriangleMesh) -> float:
    """Enclosed volume in ml. Requires a closed mesh.

    Warns (UserWarning) when the signed volume is negative, i.e. the winding
    encloses the volume with inward normals; the absolute value is returned.
    """
    if mesh.n_triangles == 0:
        raise EmptyMesh("cannot compute volume of an empty mesh")
    n_boundary = boundary_edges(mesh).shape[0]
    if n_boundary:
        raise NotClosed(f"mesh has {n_boundary} boundary edges; volume undefined")
    signed = signed_volume_mm3(mesh)
    if signed < 0:
        warnings.warn(
            "mesh winding is inward-facing (negative signed volume); returning |V|",
            UserWarning,
            stacklevel=2,
        )
    return abs(signed) / MM3_PER_ML


def mesh_area(mesh: TriangleMesh) -> float:
    """Total surface area in mm^2."""
    return float(mesh.triangle_areas().sum())
