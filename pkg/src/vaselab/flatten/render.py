"""Rasterization and export of planar maps."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from ..errors import EmptyMap
from .unwrap import FlatMap2D


def render_flatmap(
    flatmap: FlatMap2D,
    px_per_mm: float = 2.0,
    background=(1.0, 1.0, 1.0),
    distortion_overlay: bool = False,
) -> np.ndarray:
    """Rasterize the map with barycentric color interpolation.

    Returns (H, W, 3) float RGB in [0, 1]. Canvas width/height are
    round(extent * px_per_mm). With distortion_overlay, triangles are tinted
    by their angular distortion instead of vertex colors.
    """
    if px_per_mm <= 0:
        raise ValueError(f"px_per_mm must be positive, got {px_per_mm}")
    if flatmap.cut_mesh.n_triangles == 0:
        raise EmptyMap("no triangles to rasterize")
    colors = flatmap.cut_mesh.colors
    if colors is None and not distortion_overlay:
        raise ValueError("mesh has no per-vertex colors; nothing to render")

    pos = flatmap.positions
    lo = pos.min(axis=0)
    hi = pos.max(axis=0)
    extent = hi - lo
    w = max(int(round(extent[0] * px_per_mm)), 1)
    h = max(int(round(extent[1] * px_per_mm)), 1)
    img = np.empty((h, w, 3), dtype=np.float64)
    img[:] = np.asarray(background, dtype=np.float64)

    if distortion_overlay:
        ang = flatmap.angular
        finite = np.isfinite(ang)
        top = np.quantile(ang[finite], 0.98) if np.any(finite) else 1.0
        scale = max(top - 1.0, 1e-9)

    tris = flatmap.triangles
    for ti in range(tris.shape[0]):
        ia, ib, ic = tris[ti]
        a, b, c = pos[ia], pos[ib], pos[ic]
        # pixel-space corners (row 0 = top)
        pa = (a - lo) * px_per_mm
        pb = (b - lo) * px_per_mm
        pc = (c - lo) * px_per_mm
        xs = np.array([pa[0], pb[0], pc[0]])
        ys = np.array([pa[1], pb[1], pc[1]])
        x0, x1 = int(np.floor(xs.min())), int(np.ceil(xs.max()))
        y0, y1 = int(np.floor(ys.min())), int(np.ceil(ys.max()))
        x0, x1 = max(x0, 0), min(x1, w)
        y0, y1 = max(y0, 0), min(y1, h)
        if x0 >= x1 or y0 >= y1:
            continue
        gx, gy = np.meshgrid(
            np.arange(x0, x1) + 0.5, np.arange(y0, y1) + 0.5, indexing="xy"
        )
        det = (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pc[0] - pa[0]) * (pb[1] - pa[1])
        if abs(det) < 1e-12:
            continue
        l1 = ((gx - pa[0]) * (pc[1] - pa[1]) - (gy - pa[1]) * (pc[0] - pa[0])) / det
        l2 = ((pb[0] - pa[0]) * (gy - pa[1]) - (pb[1] - pa[1]) * (gx - pa[0])) / det
        l0 = 1.0 - l1 - l2
        inside = (l0 >= -1e-9) & (l1 >= -1e-9) & (l2 >= -1e-9)
        if not np.any(inside):
            continue
        if distortion_overlay:
            t = (min(float(ang[ti]), top) - 1.0) / scale if np.isfinite(ang[ti]) else 1.0
            shade = np.array([1.0, 1.0 - 0.85 * t, 1.0 - 0.85 * t])
            block = np.broadcast_to(shade, (*gx.shape, 3)).copy()
        else:
            ca, cb, cc = colors[flatmap.source_vertex[ia]], colors[
                flatmap.source_vertex[ib]
            ], colors[flatmap.source_vertex[ic]]
            block = (
                l0[..., None] * ca + l1[..., None] * cb + l2[..., None] * cc
            )
        rows = h - 1 - (np.arange(y0, y1))  # flip y: larger v -> upper row
        patch = img[rows[:, None], np.arange(x0, x1)[None, :]]
        patch[inside] = np.clip(block[inside], 0.0, 1.0)
        img[rows[:, None], np.arange(x0, x1)[None, :]] = patch
    return img


def save_render_png(img: np.ndarray, path, mm_per_px: float) -> None:
    """Write the raster as PNG with a JSON sidecar recording the scale."""
    from PIL import Image as PILImage

    path = Path(path)
    arr = (np.clip(img, 0.0, 1.0) * 255).astype(np.uint8)
    PILImage.fromarray(arr, mode="RGB").save(path)
    sidecar = path.with_suffix(path.suffix + ".json")
    sidecar.write_text(json.dumps({"mm_per_px": mm_per_px}, sort_keys=True))


def export_flatmap_obj(flatmap: FlatMap2D, path) -> None:
    """OBJ with z=0 plus a CSV sidecar of per-triangle distortion values."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for p in flatmap.positions:
            fh.write(f"v {p[0]:.9g} {p[1]:.9g} 0\n")
        for tri in flatmap.triangles:
            fh.write(f"f {tri[0] + 1} {tri[1] + 1} {tri[2] + 1}\n")
    sidecar = path.with_suffix(".csv")
    with open(sidecar, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tri_index", "sigma1", "sigma2", "angular", "areal"])
        for ti, (s1, s2) in enumerate(flatmap.sigma):
            writer.writerow(
                [ti, f"{s1:.9g}", f"{s2:.9g}", f"{s1 / s2:.9g}", f"{s1 * s2:.9g}"]
            )
