"""Shape context descriptors and matching cost.

Each sample point gets a log-polar histogram of the positions of the other
points: 5 radial bins log-spaced on [0.125, 2] x mean pairwise distance
(outliers clamp into the end bins so every histogram sums to M-1) and 12
angle bins. Matching cost is the mean chi-squared distance over the optimal
one-to-one assignment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .contour import Contour, resample_closed

N_SAMPLES = 100
R_BINS = 5
THETA_BINS = 12
R_INNER = 0.125
R_OUTER = 2.0


@dataclass(frozen=True)
class ShapeContextSet:
    histograms: np.ndarray  # (m, r_bins * theta_bins)
    n_samples: int

    def __post_init__(self):
        h = np.asarray(self.histograms, dtype=np.float64)
        if h.ndim != 2 or h.shape[0] != self.n_samples:
            raise ValueError("histograms must be (n_samples, bins)")
        expected = self.n_samples - 1
        sums = h.sum(axis=1)
        if not np.allclose(sums, expected):
            raise ValueError(f"each histogram must sum to {expected}")
        object.__setattr__(self, "histograms", h)


def shape_context(contour: Contour, n_samples: int = N_SAMPLES) -> ShapeContextSet:
    pts = resample_closed(contour.points, n_samples)
    diff = pts[None, :, :] - pts[:, None, :]  # [i, j] = p_j - p_i
    dist = np.linalg.norm(diff, axis=2)
    off = ~np.eye(n_samples, dtype=bool)
    mean_dist = float(dist[off].mean())
    if mean_dist <= 0:
        raise ValueError("contour collapses to a point")

    r_edges = np.logspace(np.log10(R_INNER), np.log10(R_OUTER), R_BINS + 1)
    # quantize bin positions so float jitter from translated/scaled inputs
    # cannot flip pairs that sit exactly on a bin edge (e.g. square corners
    # at 0 or 90 degrees)
    r_norm = np.round(dist / mean_dist, 12)
    r_bin = np.clip(np.searchsorted(r_edges, r_norm, side="right") - 1, 0, R_BINS - 1)
    ang = np.mod(np.arctan2(diff[:, :, 1], diff[:, :, 0]), 2 * np.pi)
    ang_pos = np.round(ang / (2 * np.pi / THETA_BINS), 9)
    t_bin = np.floor(ang_pos).astype(np.int64) % THETA_BINS  # circular wrap

    flat = r_bin * THETA_BINS + t_bin
    hists = np.zeros((n_samples, R_BINS * THETA_BINS))
    for i in range(n_samples):
        hists[i] = np.bincount(flat[i][off[i]], minlength=R_BINS * THETA_BINS)
    return ShapeContextSet(histograms=hists, n_samples=n_samples)


def _chi2_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ha = a[:, None, :]
    hb = b[None, :, :]
    denom = ha + hb
    with np.errstate(divide="ignore", invalid="ignore"):
        term = np.where(denom > 0, (ha - hb) ** 2 / denom, 0.0)
    return 0.5 * term.sum(axis=2)


def shape_context_cost(a: Contour, b: Contour, n_samples: int = N_SAMPLES) -> float:
    """Mean matched chi-squared cost under the optimal assignment."""
    sa = shape_context(a, n_samples)
    sb = shape_context(b, n_samples)
    cost = _chi2_matrix(sa.histograms, sb.histograms)
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].mean())
