"""Region outlines: Moore boundary tracing, arclength resampling,
silhouette extraction.

Contours are closed loops of (x, y) pixel coordinates in image space
(x = column, y = row), resampled to a fixed point count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..errors import DegenerateContour, NoForeground
from .core import Image
from .segment import LabelMap, foreground_mask

DEFAULT_POINTS = 128

# Moore neighborhood, clockwise starting west, as (dy, dx)
_MOORE = [(0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1)]


@dataclass(frozen=True)
class Contour:
    """Closed outline loop, arclength-resampled to n points."""

    points: np.ndarray  # (n, 2) float, columns x, y

    def __post_init__(self):
        p = np.asarray(self.points, dtype=np.float64)
        if p.ndim != 2 or p.shape[1] != 2 or p.shape[0] < 8:
            raise ValueError(f"contour needs (n >= 8, 2) points, got {p.shape}")
        object.__setattr__(self, "points", p)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def perimeter(self) -> float:
        d = np.diff(np.vstack([self.points, self.points[:1]]), axis=0)
        return float(np.sum(np.linalg.norm(d, axis=1)))

    def area(self) -> float:
        """Enclosed polygon area (shoelace), absolute value."""
        x, y = self.points[:, 0], self.points[:, 1]
        return float(abs(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)) / 2.0)


_MOORE_INDEX = {d: i for i, d in enumerate(_MOORE)}


def moore_trace(mask: np.ndarray) -> np.ndarray:
    """Outer boundary pixels of the region, Moore neighbor tracing.

    The scan around each boundary pixel starts just past the backtrack cell
    (the last empty cell seen); the walk stops when the first boundary move
    repeats. Returns (k, 2) float (x, y) pixel coordinates; thin necks are
    legitimately visited twice.
    """
    rows, cols = np.nonzero(mask)
    if rows.size == 0:
        raise DegenerateContour("empty region mask")
    start = (int(rows[0]), int(cols[0]))  # first in scan order
    h, w = mask.shape

    def inside(p):
        return 0 <= p[0] < h and 0 <= p[1] < w and mask[p[0], p[1]]

    boundary = [start]
    backtrack = (start[0], start[1] - 1)  # west neighbor, empty by scan order
    current = start
    first_move = None
    for _ in range(4 * int(mask.sum()) + 8):
        d0 = _MOORE_INDEX[(backtrack[0] - current[0], backtrack[1] - current[1])]
        found = None
        last_empty = backtrack
        for step in range(1, 9):
            d = (d0 + step) % 8
            cand = (current[0] + _MOORE[d][0], current[1] + _MOORE[d][1])
            if inside(cand):
                found = cand
                break
            last_empty = cand
        if found is None:
            break  # isolated pixel
        if (current, found) == first_move:
            break
        if first_move is None:
            first_move = (current, found)
        boundary.append(found)
        backtrack = last_empty
        current = found
    if len(boundary) > 1 and boundary[-1] == boundary[0]:
        boundary.pop()
    return np.array([[c, r] for r, c in boundary], dtype=np.float64)


def resample_closed(points: np.ndarray, n: int = DEFAULT_POINTS) -> np.ndarray:
    """Uniform-arclength resampling of a closed polyline to n points."""
    p = np.asarray(points, dtype=np.float64)
    if p.shape[0] < 2:
        raise DegenerateContour("cannot resample fewer than 2 points")
    loop = np.vstack([p, p[:1]])
    seg = np.linalg.norm(np.diff(loop, axis=0), axis=1)
    total = seg.sum()
    if total <= 0:
        raise DegenerateContour("zero-perimeter contour")
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0.0, total, n, endpoint=False)
    out = np.empty((n, 2))
    out[:, 0] = np.interp(targets, cum, loop[:, 0])
    out[:, 1] = np.interp(targets, cum, loop[:, 1])
    return out


def extract_outlines(
    labels: LabelMap, min_area: int = 16, n_points: int = DEFAULT_POINTS
) -> list[Contour]:
    """Outer boundary per labeled region (holes ignored), resampled.

    Regions smaller than min_area or too thin to form a loop are dropped.
    """
    out = []
    areas = labels.region_areas()
    for seg_id in range(labels.count):
        if areas[seg_id] < min_area:
            continue
        mask = labels.region_mask(seg_id)
        # outer boundary only: trace the filled region (holes disappear)
        filled = ndimage.binary_fill_holes(mask)
        try:
            pts = moore_trace(filled)
            resampled = resample_closed(pts, n_points)
        except DegenerateContour:
            continue
        out.append(Contour(points=resampled))
    return out


def silhouette(image: Image, n_points: int = DEFAULT_POINTS) -> Contour:
    """Outer contour of the largest foreground component.

    Expects an object on a near-uniform background; raises NoForeground when
    thresholding finds nothing.
    """
    mask = foreground_mask(image)
    if mask is None:
        raise NoForeground("image has no separable foreground")
    lab, n = ndimage.label(mask, structure=np.ones((3, 3), dtype=bool))
    if n == 0:
        raise NoForeground("no foreground component")
    counts = np.bincount(lab.ravel())
    counts[0] = 0
    biggest = int(np.argmax(counts))
    comp = lab == biggest
    filled = ndimage.binary_fill_holes(comp)
    pts = moore_trace(filled)
    try:
        return Contour(points=resample_closed(pts, n_points))
    except DegenerateContour as exc:
        raise NoForeground(f"foreground too small to outline: {exc}") from exc
