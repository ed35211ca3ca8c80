"""Filling-volume (capacity) computation.

Four routes to a capacity in ml:
  revolve      integrate pi * r(z)^2 over a measured inner profile
  inner_mesh   enclosed volume of a (capped) scanned inner surface
  offset       shrink the outer surface inward by the wall thickness
  mass_density subtract ceramic volume (mass / bulk density) from the hull

Open rims are capped with a planar disc fitted to the boundary loop; the
fill level is the rim plane (brimful capacity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InconsistentInputs,
    NotClosed,
    OffsetCollapse,
    TooFewSamples,
)
from .mesh.core import (
    MM3_PER_ML,
    TriangleMesh,
    boundary_edges,
    mesh_volume,
    signed_volume_mm3,
)
from .mesh.profile import Profile


@dataclass(frozen=True)
class CapacityResult:
    method: str  # revolve | inner_mesh | offset | mass_density | voxel
    volume_ml: float
    uncertainty_note: str = ""

    def __post_init__(self):
        if self.volume_ml < 0:
            raise ValueError("capacity cannot be negative")

    def to_dict(self):
        return {
            "method": self.method,
            "volume_ml": self.volume_ml,
            "notes": self.uncertainty_note,
        }


def volume_of_revolution(profile: Profile) -> CapacityResult:
    """V = pi * integral of r(z)^2 dz, trapezoid rule over the samples."""
    z, r = profile.z, profile.r
    if len(z) < 2:
        raise TooFewSamples(f"profile needs >= 2 samples, got {len(z)}")
    v_mm3 = np.pi * np.trapezoid(r**2, z)
    return CapacityResult(
        method="revolve",
        volume_ml=float(v_mm3 / MM3_PER_ML),
        uncertainty_note=f"trapezoid rule over {len(z)} profile samples",
    )


def capacity_inner_mesh(inner: TriangleMesh) -> CapacityResult:
    """Enclosed volume of a closed inner surface (cap open rims first)."""
    vol = mesh_volume(inner)  # raises NotClosed on boundary edges
    return CapacityResult(
        method="inner_mesh",
        volume_ml=vol,
        uncertainty_note=f"divergence-theorem volume over {inner.n_triangles} triangles",
    )


def _boundary_loops(mesh: TriangleMesh):
    """Ordered vertex loops of the mesh boundary."""
    edges = boundary_edges(mesh)
    if edges.shape[0] == 0:
        return []
    succ: dict[int, list[int]] = {}
    for a, b in edges:
        succ.setdefault(int(a), []).append(int(b))
        succ.setdefault(int(b), []).append(int(a))
    unused = {tuple(sorted((int(a), int(b)))) for a, b in edges}
    loops = []
    while unused:
        start_edge = min(unused)
        a, b = start_edge
        loop = [a, b]
        unused.discard(start_edge)
        while True:
            nxt = None
            for cand in succ[loop[-1]]:
                key = tuple(sorted((loop[-1], cand)))
                if key in unused:
                    nxt = cand
                    break
            if nxt is None:
                break
            unused.discard(tuple(sorted((loop[-1], nxt))))
            if nxt == loop[0]:
                break
            loop.append(nxt)
        if len(loop) >= 3:
            loops.append(loop)
    return loops


def cap_rim(mesh: TriangleMesh) -> TriangleMesh:
    """Close every boundary loop with a centroid fan disc.

    The disc is planar in the least-squares sense (fan from the loop
    centroid); winding follows the loop order, which is irrelevant for the
    unsigned volume downstream.
    """
    loops = _boundary_loops(mesh)
    if not loops:
        return mesh
    vertices = [mesh.vertices]
    tris = [mesh.triangles]
    colors_ok = mesh.colors is not None
    colors = [mesh.colors] if colors_ok else None
    next_idx = mesh.n_vertices
    for loop in loops:
        center = mesh.vertices[loop].mean(axis=0)
        vertices.append(center[None, :])
        if colors_ok:
            colors.append(mesh.colors[loop].mean(axis=0)[None, :])
        fan = [
            (next_idx, loop[k], loop[(k + 1) % len(loop)]) for k in range(len(loop))
        ]
        tris.append(np.asarray(fan, dtype=np.int64))
        next_idx += 1
    return TriangleMesh(
        np.concatenate(vertices, axis=0),
        np.concatenate(tris, axis=0),
        np.concatenate(colors, axis=0) if colors_ok else None,
    )


def interior_offset(outer: TriangleMesh, thickness: float) -> TriangleMesh:
    """Shrink a closed outer surface inward by a constant wall thickness.

    Each vertex is displaced so that every incident face plane moves inward
    by `thickness` (area-weighted least squares with a clamped eigenvalue
    solve); on flat regions this reduces to the plain normal offset, at
    creases it reproduces the exact plane-intersection offset. Raises
    OffsetCollapse when the thickness exceeds the local feature size,
    detected via flipped triangles or a non-positive result volume.
    """
    if thickness <= 0:
        raise ValueError(f"thickness must be positive, got {thickness}")
    n_boundary = boundary_edges(outer).shape[0]
    if n_boundary:
        raise NotClosed(f"outer surface has {n_boundary} boundary edges")

    signed = signed_volume_mm3(outer)
    orient = 1.0 if signed >= 0 else -1.0
    face_n = outer.triangle_normals(normalized=False) * orient  # length ~ 2*area

    n_v = outer.n_vertices
    scatter = np.zeros((n_v, 3, 3))
    rhs = np.zeros((n_v, 3))
    weights = np.linalg.norm(face_n, axis=1)
    unit_n = np.zeros_like(face_n)
    ok = weights > 0
    unit_n[ok] = face_n[ok] / weights[ok, None]
    outer_products = unit_n[:, :, None] * unit_n[:, None, :] * weights[:, None, None]
    for k in range(3):
        idx = outer.triangles[:, k]
        np.add.at(scatter, idx, outer_products)
        np.add.at(rhs, idx, unit_n * weights[:, None])
    total_w = np.zeros(n_v)
    for k in range(3):
        np.add.at(total_w, outer.triangles[:, k], weights)
    total_w = np.maximum(total_w, 1e-30)
    scatter /= total_w[:, None, None]
    rhs = rhs / total_w[:, None] * thickness

    # eigenvalue-clamped solve: unresolved directions fall back to the mean
    # normal instead of exploding
    evals, evecs = np.linalg.eigh(scatter)
    evals = np.maximum(evals, 0.05)
    coeff = np.einsum("nij,ni->nj", evecs, rhs)  # components in eigenbasis
    delta = np.einsum("nij,nj->ni", evecs, coeff / evals)

    inner = TriangleMesh(
        outer.vertices - delta, outer.triangles.copy(),
        None if outer.colors is None else outer.colors.copy(),
    )

    new_n = inner.triangle_normals(normalized=False) * orient
    flipped = np.einsum("ij,ij->i", new_n, face_n) <= 0
    if np.any(flipped):
        raise OffsetCollapse(
            f"{int(flipped.sum())} triangles flipped; thickness {thickness} mm exceeds local feature size"
        )
    inner_signed = signed_volume_mm3(inner)
    if inner_signed * orient <= 0:
        # whole-body inversion: every feature size was below 2*thickness
        raise OffsetCollapse(
            f"offset passed through itself; thickness {thickness} mm exceeds the feature size"
        )
    if abs(inner_signed) >= abs(signed):
        raise OffsetCollapse("offset did not shrink the enclosed volume")
    return inner


def capacity_offset(outer: TriangleMesh, thickness: float) -> CapacityResult:
    inner = interior_offset(outer, thickness)
    return CapacityResult(
        method="offset",
        volume_ml=mesh_volume(inner),
        uncertainty_note=f"constant wall thickness {thickness} mm assumed",
    )


def capacity_mass_density(
    outer: TriangleMesh, mass_g: float, density_g_per_ml: float
) -> CapacityResult:
    """Capacity = enclosed hull volume minus ceramic volume (mass / density)."""
    if density_g_per_ml <= 0:
        raise ValueError(f"density must be positive, got {density_g_per_ml}")
    if mass_g <= 0:
        raise ValueError(f"mass must be positive, got {mass_g}")
    hull_ml = mesh_volume(outer)
    ceramic_ml = mass_g / density_g_per_ml
    if ceramic_ml > hull_ml:
        raise InconsistentInputs(
            f"ceramic volume {ceramic_ml:.1f} ml exceeds hull volume {hull_ml:.1f} ml"
        )
    return CapacityResult(
        method="mass_density",
        volume_ml=hull_ml - ceramic_ml,
        uncertainty_note=(
            f"hull {hull_ml:.1f} ml minus ceramic {ceramic_ml:.1f} ml "
            f"at bulk density {density_g_per_ml} g/ml"
        ),
    )
