"""Void labeling, porosity statistics and cavity ("phantom body") capacity.

Connectivity pairing: air/void components use 26-connectivity, material
6-connectivity (the complementary pairing avoids topological paradoxes).
Labels are deterministic: components are numbered by the x-fastest scan
position of their first voxel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..capacity import CapacityResult
from ..errors import NoCavity
from ..mesh.core import MM3_PER_ML
from .grid import BinaryGrid, VoxelGrid, binarize

_STRUCTS = {
    6: ndimage.generate_binary_structure(3, 1),
    26: np.ones((3, 3, 3), dtype=bool),
}


@dataclass(frozen=True)
class VoidComponent:
    label: int
    voxel_count: int
    volume_mm3: float
    centroid: np.ndarray  # mm
    principal_axes: np.ndarray  # (3, 3) rows, descending eigenvalue order
    elongation: float  # lambda1 / lambda3 of the coordinate covariance

    def __post_init__(self):
        if self.elongation < 1.0 - 1e-9:
            raise ValueError("elongation must be >= 1")


@dataclass(frozen=True)
class PorosityReport:
    porosity_fraction: float
    components: tuple
    envelope_voxels: int
    material_voxels: int
    void_voxels: int


def _scan_order_relabel(raw_labels: np.ndarray, n_raw: int) -> tuple[np.ndarray, int]:
    """Renumber labels 1..n by first occurrence in x-fastest order."""
    if n_raw == 0:
        return np.zeros_like(raw_labels), 0
    flat = raw_labels.ravel(order="F")  # (nx,ny,nz)[x fastest]
    uniq, first = np.unique(flat, return_index=True)
    pairs = [(f, u) for u, f in zip(uniq, first) if u != 0]
    pairs.sort()
    remap = np.zeros(n_raw + 1, dtype=raw_labels.dtype)
    for new_id, (_, old) in enumerate(pairs, start=1):
        remap[old] = new_id
    return remap[raw_labels], len(pairs)


def label_components(
    grid: BinaryGrid, phase: str = "material", connectivity: int = 26
) -> tuple[np.ndarray, list[dict]]:
    """Connected components over the chosen phase.

    Returns (labels, components): labels holds 0 outside the phase and
    1..n inside; components lists {label, voxel_count, volume_mm3} in label
    order.
    """
    if phase not in ("material", "air"):
        raise ValueError(f"phase must be 'material' or 'air', got '{phase}'")
    if connectivity not in _STRUCTS:
        raise ValueError(f"connectivity must be 6 or 26, got {connectivity}")
    mask = grid.bits if phase == "material" else ~grid.bits
    raw, n_raw = ndimage.label(mask, structure=_STRUCTS[connectivity])
    labels, n = _scan_order_relabel(raw, n_raw)
    counts = np.bincount(labels.ravel(), minlength=n + 1)
    vox = grid.voxel_volume_mm3
    components = [
        {
            "label": int(lbl),
            "voxel_count": int(counts[lbl]),
            "volume_mm3": float(counts[lbl] * vox),
        }
        for lbl in range(1, n + 1)
    ]
    return labels, components


def _boundary_label_set(labels: np.ndarray) -> set:
    faces = [
        labels[0, :, :], labels[-1, :, :],
        labels[:, 0, :], labels[:, -1, :],
        labels[:, :, 0], labels[:, :, -1],
    ]
    out = set()
    for f in faces:
        out.update(np.unique(f).tolist())
    out.discard(0)
    return out


def _voxel_centers_mm(idx: tuple[np.ndarray, ...], spacing) -> np.ndarray:
    sx, sy, sz = spacing
    return np.stack(
        [(idx[0] + 0.5) * sx, (idx[1] + 0.5) * sy, (idx[2] + 0.5) * sz], axis=1
    )


def _component_pca(coords: np.ndarray, spacing) -> tuple[np.ndarray, np.ndarray, float]:
    """Covariance eigenstructure of voxel centers.

    Each voxel contributes its own cube second moment (s^2/12 per axis) so
    single-voxel-thick voids keep a finite, meaningful elongation.
    """
    mu = coords.mean(axis=0)
    centered = coords - mu
    cov = centered.T @ centered / len(coords)
    cov += np.diag([s * s / 12.0 for s in spacing])
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    axes = evecs[:, order].T
    elongation = float(evals[0] / max(evals[2], 1e-300))
    return mu, axes, elongation


def porosity_stats(grid: VoxelGrid, threshold: float) -> PorosityReport:
    """Voids = air components fully enclosed by material; envelope = material
    plus enclosed air. Per-void PCA yields principal axes and elongation.
    """
    binary = binarize(grid, threshold)
    labels, components = label_components(binary, phase="air", connectivity=26)
    exterior = _boundary_label_set(labels)

    material_voxels = int(np.count_nonzero(binary.bits))
    vox = binary.voxel_volume_mm3
    voids = []
    void_voxels = 0
    for comp in components:
        lbl = comp["label"]
        if lbl in exterior:
            continue
        idx = np.nonzero(labels == lbl)
        coords = _voxel_centers_mm(idx, binary.spacing)
        centroid, axes, elong = _component_pca(coords, binary.spacing)
        voids.append(
            VoidComponent(
                label=len(voids) + 1,
                voxel_count=comp["voxel_count"],
                volume_mm3=comp["volume_mm3"],
                centroid=centroid,
                principal_axes=axes,
                elongation=elong,
            )
        )
        void_voxels += comp["voxel_count"]

    envelope = material_voxels + void_voxels
    fraction = void_voxels / envelope if envelope else 0.0
    return PorosityReport(
        porosity_fraction=float(fraction),
        components=tuple(voids),
        envelope_voxels=envelope,
        material_voxels=material_voxels,
        void_voxels=void_voxels,
    )


def cavity_capacity(
    grid: VoxelGrid, threshold: float, cap_plane: tuple | None = None
) -> CapacityResult:
    """Capacity of the interior cavity (phantom body) in ml.

    Air reachable from the grid boundary is exterior; the remaining interior
    air is the phantom body. An optional cap plane (a, b, c, d) with
    a*x + b*y + c*z + d = 0 in mm seals an open mouth: air voxels within half
    a voxel of the plane become a virtual lid that blocks the flood without
    being counted as cavity.
    """
    binary = binarize(grid, threshold)
    air = ~binary.bits

    lid = None
    if cap_plane is not None:
        a, b, c, d = (float(v) for v in cap_plane)
        n = np.array([a, b, c])
        norm = np.linalg.norm(n)
        if norm == 0:
            raise ValueError("cap plane normal must be nonzero")
        n /= norm
        d /= norm
        nx, ny, nz = binary.dims
        sx, sy, sz = binary.spacing
        xs = (np.arange(nx) + 0.5) * sx
        ys = (np.arange(ny) + 0.5) * sy
        zs = (np.arange(nz) + 0.5) * sz
        signed = (
            n[0] * xs[:, None, None]
            + n[1] * ys[None, :, None]
            + n[2] * zs[None, None, :]
            + d
        )
        half = 0.5 * (abs(n[0]) * sx + abs(n[1]) * sy + abs(n[2]) * sz)
        lid = air & (np.abs(signed) <= half)
        air = air & ~lid

    raw, n_raw = ndimage.label(air, structure=_STRUCTS[26])
    labels, n = _scan_order_relabel(raw, n_raw)
    exterior = _boundary_label_set(labels)
    interior_mask = (labels > 0) & ~np.isin(labels, sorted(exterior))
    count = int(np.count_nonzero(interior_mask))
    if count == 0:
        raise NoCavity("no interior air remains after exterior flood fill")
    volume_ml = count * binary.voxel_volume_mm3 / MM3_PER_ML
    note = f"{count} interior air voxels"
    if cap_plane is not None:
        note += "; mouth sealed by a one-voxel virtual lid on the cap plane"
    return CapacityResult(method="voxel", volume_ml=volume_ml, uncertainty_note=note)
