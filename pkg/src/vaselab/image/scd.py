"""Silhouette contour descriptor: multi-scale turning-angle signature.

The signature stacks the per-point turning angles of the contour at several
circular smoothing levels. Turning angles are invariant to translation,
rotation and uniform scale by construction; the smoothing windows are
fractions of the point count, i.e. perimeter-proportional. Descriptors are
compared by the minimum L1 distance over all cyclic shifts and reflection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateContour
from .contour import Contour

# smoothing half-widths as fractions of the contour point count; every level
# smooths so pixel-staircase noise from digitized outlines cannot dominate
SCALE_FRACTIONS = (1 / 64, 1 / 32, 1 / 16, 1 / 8)


@dataclass(frozen=True)
class SilhouetteDescriptor:
    signature: np.ndarray  # (scales, n) turning angles
    n_points: int

    def __post_init__(self):
        s = np.asarray(self.signature, dtype=np.float64)
        if s.ndim != 2 or s.shape[1] != self.n_points:
            raise ValueError("signature must be (scales, n_points)")
        object.__setattr__(self, "signature", s)


def _circular_box_smooth(points: np.ndarray, half_width: int) -> np.ndarray:
    if half_width < 1:
        return points
    n = points.shape[0]
    kernel = 2 * half_width + 1
    idx = (np.arange(n)[:, None] + np.arange(-half_width, half_width + 1)[None, :]) % n
    return points[idx].mean(axis=1)


def turning_angles(points: np.ndarray) -> np.ndarray:
    """Signed exterior angle at each vertex of the closed polygon."""
    prev = np.roll(points, 1, axis=0)
    nxt = np.roll(points, -1, axis=0)
    v1 = points - prev
    v2 = nxt - points
    cross = v1[:, 0] * v2[:, 1] - v1[:, 1] * v2[:, 0]
    dot = np.einsum("ij,ij->i", v1, v2)
    return np.arctan2(cross, dot)


def scd(contour: Contour) -> SilhouetteDescriptor:
    pts = contour.points
    if contour.perimeter() <= 0:
        raise DegenerateContour("zero-perimeter contour")
    n = pts.shape[0]
    rows = []
    for frac in SCALE_FRACTIONS:
        hw = int(round(frac * n))
        rows.append(turning_angles(_circular_box_smooth(pts, hw)))
    return SilhouetteDescriptor(signature=np.stack(rows), n_points=n)


def scd_distance(a: SilhouetteDescriptor, b: SilhouetteDescriptor) -> float:
    """Min over cyclic shifts and reflection of the mean L1 difference."""
    if a.n_points != b.n_points or a.signature.shape != b.signature.shape:
        raise ValueError("descriptors must share point count and scales")
    n = a.n_points
    sig_a = a.signature  # (s, n)
    # reflection reverses traversal order and negates angles
    refl = -b.signature[:, ::-1]
    best = np.inf
    for cand in (b.signature, refl):
        # all cyclic shifts at once: (n_shifts, s, n)
        idx = (np.arange(n)[None, :] + np.arange(n)[:, None]) % n
        shifted = cand[:, idx]  # (s, n_shifts, n)
        diffs = np.abs(shifted - sig_a[:, None, :]).mean(axis=(0, 2))
        best = min(best, float(diffs.min()))
    return best
