"""Naive rollout of a vessel surface on a fitted proxy.

The mesh is cut along one meridian (the seam) and every vertex is mapped by
the proxy parametrization:

  cylinder  (R*theta, z)                       -- developable
  cone      polar around the apex: slant distance s, angle theta*sin(alpha)
  sphere    plate carree (R*theta, R*latitude) -- true scale along meridians

Triangles crossing the seam get duplicated vertices lifted by 2*pi;
on-axis vertices (cone apexes, sphere poles) take the circular mean angle of
their triangle's other corners, one duplicate per incident triangle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import SeamCutFailed
from ..mesh.core import TriangleMesh
from .proxy import ProxyFit


@dataclass(frozen=True)
class DistortionSample:
    """Singular values of one triangle's 3D->2D linear map."""

    sigma1: float
    sigma2: float

    @property
    def angular(self) -> float:
        return self.sigma1 / self.sigma2

    @property
    def areal(self) -> float:
        return self.sigma1 * self.sigma2


@dataclass(frozen=True)
class FlatMap2D:
    """Planar embedding of a cut mesh.

    positions      (n, 2) mm
    cut_mesh       the cut 3D mesh (duplicated seam/pole vertices included)
    source_vertex  (n,) index into the original mesh for each cut vertex
    sigma          (m, 2) per-triangle singular values (sigma1 >= sigma2)
    energy_history per-iteration spring energy when produced by relaxation
    """

    positions: np.ndarray
    cut_mesh: TriangleMesh
    source_vertex: np.ndarray
    seam_angle: float
    sigma: np.ndarray
    energy_history: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        p = np.asarray(self.positions, dtype=np.float64)
        if p.shape != (self.cut_mesh.n_vertices, 2):
            raise ValueError("positions must be (n_cut_vertices, 2)")
        if not np.all(np.isfinite(p)):
            raise ValueError("positions must be finite")
        object.__setattr__(self, "positions", p)

    @property
    def triangles(self) -> np.ndarray:
        return self.cut_mesh.triangles

    @property
    def per_triangle(self) -> list[DistortionSample]:
        return [DistortionSample(float(a), float(b)) for a, b in self.sigma]

    @property
    def angular(self) -> np.ndarray:
        return self.sigma[:, 0] / self.sigma[:, 1]

    @property
    def areal(self) -> np.ndarray:
        return self.sigma[:, 0] * self.sigma[:, 1]

    def with_positions(self, positions, energy_history=None) -> "FlatMap2D":
        return FlatMap2D(
            positions=positions,
            cut_mesh=self.cut_mesh,
            source_vertex=self.source_vertex,
            seam_angle=self.seam_angle,
            sigma=triangle_distortion(self.cut_mesh, positions),
            energy_history=self.energy_history if energy_history is None else energy_history,
        )


def triangle_distortion(cut_mesh: TriangleMesh, positions: np.ndarray) -> np.ndarray:
    """Per-triangle singular values of the 3D->2D map; NaN for degenerates."""
    a3, b3, c3 = cut_mesh.triangle_corners()
    t = cut_mesh.triangles
    a2, b2, c2 = positions[t[:, 0]], positions[t[:, 1]], positions[t[:, 2]]

    e1 = b3 - a3
    e2 = c3 - a3
    l1 = np.linalg.norm(e1, axis=1)
    ok = l1 > 0
    xhat = np.zeros_like(e1)
    xhat[ok] = e1[ok] / l1[ok, None]
    e2x = np.einsum("ij,ij->i", e2, xhat)
    perp = e2 - e2x[:, None] * xhat
    e2y = np.linalg.norm(perp, axis=1)
    ok &= e2y > 1e-300

    # J = F S^-1 with S upper triangular [[l1, e2x], [0, e2y]]
    f1 = b2 - a2
    f2 = c2 - a2
    with np.errstate(divide="ignore", invalid="ignore"):
        ja = f1[:, 0] / l1
        jc = f1[:, 1] / l1
        jb = (f2[:, 0] - ja * e2x) / e2y
        jd = (f2[:, 1] - jc * e2x) / e2y

    # closed-form 2x2 singular values
    e = (ja + jd) / 2
    f = (ja - jd) / 2
    g = (jc + jb) / 2
    h = (jc - jb) / 2
    q = np.hypot(e, h)
    r = np.hypot(f, g)
    s1 = q + r
    s2 = np.abs(q - r)
    s1[~ok] = np.nan
    s2[~ok] = np.nan
    return np.stack([s1, s2], axis=1)


def _circular_mean(angles: np.ndarray) -> float:
    return float(np.arctan2(np.mean(np.sin(angles)), np.mean(np.cos(angles))))


def unwrap_on_proxy(
    mesh: TriangleMesh, proxy: ProxyFit, seam_angle: float = np.pi
) -> FlatMap2D:
    """Cut the mesh along the seam meridian and map it by the proxy rollout."""
    axis = proxy.axis
    d = axis.direction
    # stable in-plane frame
    ref = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = ref - (ref @ d) * d
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(d, e1)

    rel = mesh.vertices - axis.point
    z = rel @ d
    x = rel @ e1
    y = rel @ e2
    rho = np.hypot(x, y)
    on_axis = rho < 1e-9 * max(mesh.bbox_diagonal(), 1.0)
    theta = np.mod(np.arctan2(y, x) - seam_angle, 2 * np.pi)

    tris = mesh.triangles
    n_orig = mesh.n_vertices

    # decide per-triangle lifts over off-axis corners (vectorized; the seam
    # and the poles only touch a thin band of triangles)
    corner_theta = theta[tris]  # (m, 3)
    corner_off = ~on_axis[tris]
    masked_lo = np.where(corner_off, corner_theta, np.inf).min(axis=1)
    masked_hi = np.where(corner_off, corner_theta, -np.inf).max(axis=1)
    n_off = corner_off.sum(axis=1)
    wraps = (n_off >= 2) & (masked_hi - masked_lo > np.pi)
    lifted = wraps[:, None] & (corner_theta < np.pi) & corner_off

    lifted_theta = corner_theta + 2 * np.pi * lifted
    check_lo = np.where(corner_off, lifted_theta, np.inf).min(axis=1)
    check_hi = np.where(corner_off, lifted_theta, -np.inf).max(axis=1)
    bad = (n_off >= 2) & (check_hi - check_lo > np.pi)
    if np.any(bad):
        ti = int(np.nonzero(bad)[0][0])
        raise SeamCutFailed(
            f"triangle {ti} spans more than half a turn even after lifting; "
            "seam neighborhood is not resolvable at this resolution"
        )

    # build cut vertex table: original + lifted duplicates + per-triangle pole copies
    lift_dup: dict[int, int] = {}
    cut_source = list(range(n_orig))
    extra_theta: list[float] = []
    cut_tris = tris.copy()

    def lifted_id(v: int) -> int:
        if v not in lift_dup:
            lift_dup[v] = n_orig + len(extra_theta)
            cut_source.append(v)
            extra_theta.append(theta[v] + 2 * np.pi)
        return lift_dup[v]

    touched = np.nonzero(wraps | ~corner_off.all(axis=1))[0]
    for ti in touched:
        for k in range(3):
            v = int(tris[ti, k])
            if lifted[ti, k]:
                cut_tris[ti, k] = lifted_id(v)
        for k in range(3):
            v = int(tris[ti, k])
            if on_axis[v]:
                others = lifted_theta[ti][corner_off[ti]]
                ang = _circular_mean(others) if others.size else 0.0
                if ang < 0:
                    ang += 2 * np.pi
                new_id = n_orig + len(extra_theta)
                cut_source.append(v)
                extra_theta.append(ang)
                cut_tris[ti, k] = new_id

    source = np.asarray(cut_source, dtype=np.int64)
    all_theta = np.concatenate([theta.astype(np.float64), np.asarray(extra_theta)])
    cut_vertices = mesh.vertices[source]
    cut_colors = None if mesh.colors is None else mesh.colors[source]
    cut_mesh = TriangleMesh(cut_vertices, cut_tris, cut_colors)

    zz = z[source]
    rr = rho[source]

    if proxy.kind == "cylinder":
        u = proxy.radius * all_theta
        v = zz
    elif proxy.kind == "cone":
        s = np.linalg.norm(mesh.vertices[source] - proxy.apex, axis=1)
        phi = all_theta * np.sin(proxy.half_angle)
        u = s * np.sin(phi)
        v = -s * np.cos(phi)
    elif proxy.kind == "sphere":
        zc = (proxy.center - axis.point) @ d
        lat = np.arctan2(zz - zc, rr)
        u = proxy.radius * all_theta
        v = proxy.radius * lat
    else:  # pragma: no cover
        raise ValueError(proxy.kind)

    positions = np.stack([u, v], axis=1)
    return FlatMap2D(
        positions=positions,
        cut_mesh=cut_mesh,
        source_vertex=source,
        seam_angle=float(seam_angle),
        sigma=triangle_distortion(cut_mesh, positions),
    )
