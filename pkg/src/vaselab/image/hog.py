"""Histogram-of-oriented-gradients descriptor.

Pipeline, fixed so an independent implementation can reproduce it exactly:
canonical 128x128 gray input; gradients by centered differences (one-sided
at borders, np.gradient convention); unsigned orientations in [0, pi) with
9 bins whose centers sit at i*pi/9; magnitude-weighted circular-linear
interpolation between the two nearest centers; 8x8-pixel cells; 2x2-cell
blocks at stride 1 with L2-hys normalization (clip 0.2); blocks flattened
row-major, cells row-major within a block, bins last.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Image, to_canonical


@dataclass(frozen=True)
class HogParams:
    size: int = 128  # canonical square input
    cell: int = 8  # pixels per cell side
    block: int = 2  # cells per block side
    bins: int = 9
    clip: float = 0.2
    eps: float = 1e-10

    def __post_init__(self):
        if self.size % self.cell != 0:
            raise ValueError("size must be a multiple of cell")

    @property
    def cells_per_side(self) -> int:
        return self.size // self.cell

    @property
    def blocks_per_side(self) -> int:
        return self.cells_per_side - self.block + 1

    @property
    def length(self) -> int:
        return self.blocks_per_side**2 * self.block**2 * self.bins


@dataclass(frozen=True)
class HogDescriptor:
    vector: np.ndarray
    params: HogParams

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=np.float64)
        if v.shape != (self.params.length,):
            raise ValueError(
                f"descriptor length {v.shape} does not match params ({self.params.length})"
            )
        if np.any(v < 0):
            raise ValueError("descriptor entries must be non-negative")
        object.__setattr__(self, "vector", v)


def cell_histograms(gray: np.ndarray, params: HogParams) -> np.ndarray:
    """(cells, cells, bins) magnitude-weighted orientation histograms."""
    gy, gx = np.gradient(gray)
    mag = np.hypot(gx, gy)
    ang = np.mod(np.arctan2(gy, gx), np.pi)  # unsigned orientation

    binw = np.pi / params.bins
    pos = ang / binw  # in [0, bins)
    i0 = np.floor(pos).astype(np.int64) % params.bins
    frac = pos - np.floor(pos)
    i1 = (i0 + 1) % params.bins

    n = params.cells_per_side
    c = params.cell
    hists = np.zeros((n, n, params.bins))
    for b in range(params.bins):
        votes = mag * (((i0 == b) * (1.0 - frac)) + ((i1 == b) * frac))
        hists[:, :, b] = votes.reshape(n, c, n, c).sum(axis=(1, 3))
    return hists


def block_normalize(hists: np.ndarray, params: HogParams) -> np.ndarray:
    """2x2-cell blocks, stride one cell, L2-hys; flattened descriptor."""
    nb = params.blocks_per_side
    k = params.block
    out = np.empty((nb, nb, k * k * params.bins))
    for by in range(nb):
        for bx in range(nb):
            v = hists[by : by + k, bx : bx + k, :].reshape(-1)
            norm = np.sqrt(np.sum(v * v) + params.eps**2)
            v = v / norm
            v = np.minimum(v, params.clip)
            norm = np.sqrt(np.sum(v * v) + params.eps**2)
            out[by, bx] = v / norm
    return out.reshape(-1)


def hog(image: Image, params: HogParams = HogParams()) -> HogDescriptor:
    canonical = to_canonical(image, params.size)
    hists = cell_histograms(canonical.values, params)
    return HogDescriptor(vector=block_normalize(hists, params), params=params)


def hog_distance(a: HogDescriptor, b: HogDescriptor) -> float:
    """Euclidean distance between descriptors."""
    return float(np.linalg.norm(a.vector - b.vector))
