"""Axis-of-revolution estimation from vertex normals.

Every surface normal of a surface of revolution intersects its axis. For a
candidate axis (point a, unit direction d) and a vertex p with unit normal n,
the moment residual

    r = d . ((p - a) x n)

vanishes exactly when the normal line through p meets the axis line. The fit
alternates two closed-form steps: given a, the best d is the smallest
eigenvector of the moment scatter matrix; given d, the best a solves a 3x3
linear system. A trimming pass (inliers within 2x the median residual)
tolerates handles and spouts that break the rotational symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import Degenerate, EmptyMesh, NotRevolutionLike
from .core import TriangleMesh


@dataclass(frozen=True)
class Axis:
    """Axis line: point (mm) + unit direction, with fit residual in mm.

    direction_ambiguous is set when the residual does not single out one
    direction (spheres: every diameter is an axis).
    """

    point: np.ndarray
    direction: np.ndarray
    fit_rms: float
    direction_ambiguous: bool = False

    def __post_init__(self):
        p = np.asarray(self.point, dtype=np.float64).reshape(3)
        d = np.asarray(self.direction, dtype=np.float64).reshape(3)
        norm = np.linalg.norm(d)
        if not np.isfinite(norm) or norm == 0:
            raise ValueError("axis direction must be a nonzero vector")
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "direction", d / norm)

    def heights(self, points: np.ndarray) -> np.ndarray:
        return (points - self.point) @ self.direction

    def radii(self, points: np.ndarray) -> np.ndarray:
        rel = points - self.point
        z = rel @ self.direction
        return np.linalg.norm(rel - z[:, None] * self.direction, axis=1)


def _best_direction(p, n, a):
    """Smallest-eigenvector direction of the moment scatter at anchor a."""
    v = np.cross(p - a, n)
    m = v.T @ v
    evals, evecs = np.linalg.eigh(m)
    return evecs[:, 0], evals


def _best_point(p, n, d):
    """Least-squares axis point for fixed direction (gauge: minimum norm)."""
    c = np.cross(n, d)  # (k,3), perpendicular to d
    b = np.cross(p, n) @ d
    m = c.T @ c
    rhs = c.T @ b
    a, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    return a


def _line_distances(p, n, a, d):
    """True skew-line distances between normal lines and the axis line.

    Normal lines nearly parallel to the axis carry no lateral information;
    they get the point-to-line distance instead.
    """
    cross = np.cross(n, d)
    denom = np.linalg.norm(cross, axis=1)
    num = np.abs(np.einsum("ij,j->i", np.cross(p - a, n), d))
    dist = np.empty(len(p))
    ok = denom > 1e-6
    dist[ok] = num[ok] / denom[ok]
    if np.any(~ok):
        rel = p[~ok] - a
        dist[~ok] = np.linalg.norm(np.cross(rel, n[~ok]), axis=1)
    return dist


def estimate_axis(
    mesh: TriangleMesh,
    max_rms_fraction: float = 0.05,
    n_alternations: int = 60,
) -> Axis:
    """Fit the axis of revolution to per-vertex normal lines.

    Raises Degenerate when the normals are near-parallel (planar input) and
    NotRevolutionLike when the final rms exceeds max_rms_fraction of the
    bbox diagonal.
    """
    if mesh.n_vertices == 0 or mesh.n_triangles == 0:
        raise EmptyMesh("axis estimation needs a non-empty mesh")
    normals = mesh.vertex_normals()
    lens = np.linalg.norm(normals, axis=1)
    keep = lens > 0.5
    p = mesh.vertices[keep]
    n = normals[keep]
    if len(p) < 3:
        raise Degenerate("too few vertices with usable normals")

    # planar input: all normals inside a tiny cone
    mean_n = n.mean(axis=0)
    mean_len = np.linalg.norm(mean_n)
    if mean_len > 1 - 1e-6:
        raise Degenerate("vertex normals are parallel; no axis is constrained")

    diag = mesh.bbox_diagonal()
    lo, hi = mesh.bbox()
    extents = hi - lo
    d = np.zeros(3)
    d[int(np.argmax(extents))] = 1.0
    a = mesh.vertices.mean(axis=0)

    def alternate(p, n, a, d):
        for _ in range(n_alternations):
            d_new, _ = _best_direction(p, n, a)
            if d_new @ d < 0:
                d_new = -d_new
            a_new = _best_point(p, n, d_new)
            step = max(np.linalg.norm(a_new - a), np.linalg.norm(d_new - d) * diag)
            a, d = a_new, d_new
            if step < 1e-12 * max(diag, 1.0):
                break
        return a, d

    a, d = alternate(p, n, a, d)

    # trimming pass: drop handle/spout outliers, refit on inliers
    dist = _line_distances(p, n, a, d)
    med = np.median(dist)
    inliers = dist <= max(2.0 * med, 1e-12)
    if inliers.sum() >= 3 and inliers.sum() < len(p):
        p, n = p[inliers], n[inliers]
        a, d = alternate(p, n, a, d)
        dist = _line_distances(p, n, a, d)

    rms = float(np.sqrt(np.mean(dist**2)))

    # ambiguity: on a sphere every diameter fits equally well, so an axis
    # orthogonal to the chosen one scores about the same residual
    _, _, evecs = np.linalg.svd(np.cross(p - a, n), full_matrices=True)
    d_orth = evecs[1] if abs(evecs[1] @ d) < 0.9 else evecs[0]
    d_orth = d_orth - (d_orth @ d) * d
    d_orth /= max(np.linalg.norm(d_orth), 1e-30)
    a_orth = _best_point(p, n, d_orth)
    rms_orth = float(np.sqrt(np.mean(_line_distances(p, n, a_orth, d_orth) ** 2)))
    ambiguous = rms_orth <= 3.0 * rms + 1e-9 * diag

    if rms > max_rms_fraction * diag:
        raise NotRevolutionLike(
            f"axis fit rms {rms:.4g} mm exceeds {max_rms_fraction:.3g} of bbox diagonal {diag:.4g} mm"
        )
    # anchor: closest point on axis to the centroid (stable gauge)
    centroid = mesh.vertices.mean(axis=0)
    a = a + ((centroid - a) @ d) * d
    return Axis(point=a, direction=d, fit_rms=rms, direction_ambiguous=ambiguous)
