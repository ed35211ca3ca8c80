"""Radial profile extraction: vessel radius as a function of height."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import AllBinsEmpty
from .axis import Axis
from .core import TriangleMesh


@dataclass(frozen=True)
class Profile:
    """Ordered (z, r) samples measured against an axis; z strictly increasing."""

    samples: np.ndarray  # (k, 2) columns z (mm), r (mm)
    axis: Axis

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.ndim != 2 or s.shape[1] != 2:
            raise ValueError(f"samples must be (k, 2), got {s.shape}")
        if s.shape[0] >= 2 and not np.all(np.diff(s[:, 0]) > 0):
            raise ValueError("profile z values must be strictly increasing")
        if np.any(s[:, 1] < 0):
            raise ValueError("profile radii must be non-negative")
        object.__setattr__(self, "samples", s)

    @property
    def z(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def r(self) -> np.ndarray:
        return self.samples[:, 1]


def extract_profile(mesh: TriangleMesh, axis: Axis, n_bins: int) -> Profile:
    """Bin vertices by height along the axis; per-bin radius is the median
    distance to the axis (robust to handles). Empty bins are filled by linear
    interpolation from their non-empty neighbors.
    """
    if n_bins < 2:
        raise ValueError(f"n_bins must be >= 2, got {n_bins}")
    z = axis.heights(mesh.vertices)
    r = axis.radii(mesh.vertices)
    z_lo, z_hi = float(z.min()), float(z.max())
    if z_hi - z_lo <= 0:
        raise AllBinsEmpty("mesh is degenerate along the axis (zero height span)")

    edges = np.linspace(z_lo, z_hi, n_bins + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])
    which = np.clip(np.searchsorted(edges, z, side="right") - 1, 0, n_bins - 1)

    radii = np.full(n_bins, np.nan)
    for b in range(n_bins):
        sel = which == b
        if np.any(sel):
            radii[b] = np.median(r[sel])
    filled = ~np.isnan(radii)
    if not np.any(filled):
        raise AllBinsEmpty("no height bin received any vertex")
    if not np.all(filled):
        radii = np.interp(centers, centers[filled], radii[filled])

    return Profile(samples=np.stack([centers, radii], axis=1), axis=axis)
