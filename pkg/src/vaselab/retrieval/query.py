"""Ranked queries against a descriptor index, including sketch queries.

Queries are exhaustive: every indexed object is scored, sorted ascending
(lower = more similar) with ties broken by object id, and the top k
returned. Sketches are scan-converted, auto-closed when the stroke ends
nearly meet, filled, and treated as silhouette images.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..errors import DegenerateSketch
from ..image.contour import Contour
from ..image.core import Image, to_canonical
from ..image.scd import scd
from ..image.shape_context import shape_context
from .index import DescriptorIndex, describe_image, metric_distances


@dataclass(frozen=True)
class SketchQuery:
    """Hand-drawn polylines on a canvas, in canvas pixels."""

    polylines: tuple  # of (k, 2) float arrays
    canvas: tuple  # (width, height)

    def __post_init__(self):
        if len(self.polylines) < 1:
            raise DegenerateSketch("sketch needs at least one polyline")
        cleaned = []
        for pl in self.polylines:
            arr = np.asarray(pl, dtype=np.float64)
            if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
                raise DegenerateSketch("each polyline needs at least 2 points")
            cleaned.append(arr)
        w, h = self.canvas
        if w <= 0 or h <= 0:
            raise ValueError("canvas must be positive")
        object.__setattr__(self, "polylines", tuple(cleaned))
        object.__setattr__(self, "canvas", (int(w), int(h)))


@dataclass(frozen=True)
class RankedResult:
    items: tuple  # of (object_id, score), ascending score
    kind: str

    def __post_init__(self):
        scores = [s for _, s in self.items]
        if any(b < a - 1e-12 for a, b in zip(scores, scores[1:])):
            raise ValueError("scores must be non-decreasing in rank order")

    def ids(self) -> list:
        return [i for i, _ in self.items]


def _draw_segment(mask: np.ndarray, p0, p1) -> None:
    """1-px Bresenham-style stroke between two canvas points."""
    x0, y0 = p0
    x1, y1 = p1
    n = int(max(abs(x1 - x0), abs(y1 - y0), 1)) * 2 + 1
    xs = np.round(np.linspace(x0, x1, n)).astype(int)
    ys = np.round(np.linspace(y0, y1, n)).astype(int)
    h, w = mask.shape
    keep = (xs >= 0) & (xs < w) & (ys >= 0) & (ys < h)
    mask[ys[keep], xs[keep]] = True


def rasterize_sketch(q: SketchQuery, target: int = 128) -> Image:
    """Scan-convert the sketch, close near-touching ends, fill the interior,
    and letterbox to the canonical size (dark shape on white background)."""
    w, h = q.canvas
    mask = np.zeros((h, w), dtype=bool)
    diag = float(np.hypot(w, h))
    for pl in q.polylines:
        for a, b in zip(pl[:-1], pl[1:]):
            _draw_segment(mask, a, b)
        ends_gap = float(np.linalg.norm(pl[0] - pl[-1]))
        if 0 < ends_gap <= 0.02 * diag:
            _draw_segment(mask, pl[-1], pl[0])
    if int(mask.sum()) < 4:
        raise DegenerateSketch("sketch rasterized to fewer than 4 pixels")

    filled = ndimage.binary_fill_holes(mask)
    if int(filled.sum()) <= int(mask.sum()):
        # nothing enclosed: strokes only; still usable as a thin silhouette
        filled = mask
    img = Image(np.where(filled, 0.0, 1.0))
    return to_canonical(img, target)


def _query_payload(q, kind: str):
    if isinstance(q, SketchQuery):
        q = rasterize_sketch(q)
    if isinstance(q, Image):
        return describe_image(q, kind)
    if isinstance(q, Contour):
        if kind == "scd":
            return scd(q).signature
        if kind == "sc":
            return shape_context(q).histograms
        raise ValueError("contour queries support kinds 'scd' and 'sc' only")
    raise TypeError(f"unsupported query type {type(q).__name__}")


def query(index: DescriptorIndex, q, kind: str, k: int = 20) -> RankedResult:
    """Exhaustive scan, ascending scores, deterministic id tie-break, top k
    (the full ranking when k exceeds the index)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    index.require_kind(kind)
    payload = _query_payload(q, kind)
    dists = metric_distances(kind, payload, index.payloads[kind])
    ids = index.ids[kind]
    order = sorted(range(len(ids)), key=lambda i: (dists[i], ids[i]))
    top = order[: min(k, len(order))]
    return RankedResult(
        items=tuple((ids[i], float(dists[i])) for i in top), kind=kind
    )
