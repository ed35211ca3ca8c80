"""Motif segmentation: graph-based (union-find over sorted edges with an
adaptive merge threshold) and morphological (threshold + closing/opening).

Edge construction order is part of the contract so results are exactly
reproducible: pixels in row-major scan order, neighbors in the fixed order
E, S, SE, SW; edges sorted by weight with a stable sort, which makes the
effective key (weight, scan position of the smaller endpoint, neighbor
order).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core import Image, _border_background


@dataclass(frozen=True)
class LabelMap:
    """Per-pixel segment ids, dense in [0, count); -1 marks unassigned
    pixels (morphological segmentation leaves the background unassigned)."""

    labels: np.ndarray  # (H, W) int32
    count: int

    def __post_init__(self):
        lab = np.asarray(self.labels, dtype=np.int32)
        if lab.ndim != 2:
            raise ValueError("labels must be 2D")
        if self.count:
            assigned = lab[lab >= 0]
            if assigned.size and assigned.max() >= self.count:
                raise ValueError("label ids must be dense in [0, count)")
        object.__setattr__(self, "labels", lab)

    def region_mask(self, seg_id: int) -> np.ndarray:
        return self.labels == seg_id

    def region_areas(self) -> np.ndarray:
        out = np.zeros(self.count, dtype=np.int64)
        assigned = self.labels[self.labels >= 0]
        if assigned.size:
            counts = np.bincount(assigned, minlength=self.count)
            out[: len(counts)] = counts
        return out


def gaussian_smooth(values: np.ndarray, sigma: float) -> np.ndarray:
    """Per-channel Gaussian pre-smoothing shared by both graph segmenters."""
    if sigma <= 0:
        return values.astype(np.float64)
    if values.ndim == 2:
        return ndimage.gaussian_filter(values.astype(np.float64), sigma)
    return np.stack(
        [ndimage.gaussian_filter(values[:, :, c].astype(np.float64), sigma) for c in range(values.shape[2])],
        axis=2,
    )


def build_grid_edges(h: int, w: int) -> tuple[np.ndarray, np.ndarray]:
    """8-neighbor grid edges in canonical construction order (E, S, SE, SW)."""
    idx = np.arange(h * w).reshape(h, w)
    pairs = []
    for dy, dx in ((0, 1), (1, 0), (1, 1), (1, -1)):
        ys = slice(0, h - dy) if dy else slice(None)
        src = idx[ys, slice(max(-dx, 0), w - dx if dx > 0 else w)]
        dst = idx[
            slice(dy, h) if dy else slice(None),
            slice(max(dx, 0), w + dx if dx < 0 else w),
        ]
        pairs.append(np.stack([src.ravel(), dst.ravel()], axis=1))
    # interleave in scan order: sort by (source pixel, neighbor order)
    tagged = []
    for order, p in enumerate(pairs):
        tag = np.full(len(p), order)
        tagged.append(np.column_stack([p[:, 0], tag, p[:, 1]]))
    allp = np.concatenate(tagged, axis=0)
    key = np.lexsort((allp[:, 1], allp[:, 0]))
    allp = allp[key]
    return allp[:, 0], allp[:, 2]


def _edge_weights(smoothed: np.ndarray, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    flat = smoothed.reshape(-1, 1) if smoothed.ndim == 2 else smoothed.reshape(-1, smoothed.shape[2])
    diff = flat[src] - flat[dst]
    return np.sqrt(np.sum(diff * diff, axis=1))


class _UnionFind:
    __slots__ = ("parent", "size", "internal")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.internal = [0.0] * n  # max internal edge weight per component

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int, weight: float) -> None:
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        self.internal[a] = weight  # edges arrive in ascending order


def egbis_segment(
    image: Image, k: float, sigma: float = 0.8, min_size: int = 8
) -> LabelMap:
    """Graph-based segmentation with the adaptive threshold
    min(Int(C1) + k/|C1|, Int(C2) + k/|C2|), plus a small-component merge
    pass. Larger k favors larger segments.
    """
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    values = gaussian_smooth(image.values, sigma)
    h, w = values.shape[:2]
    src, dst = build_grid_edges(h, w)
    weights = _edge_weights(values, src, dst)
    order = np.argsort(weights, kind="stable")

    uf = _UnionFind(h * w)
    find, union = uf.find, uf.union
    size, internal = uf.size, uf.internal
    for e in order:
        a = find(int(src[e]))
        b = find(int(dst[e]))
        if a == b:
            continue
        wgt = float(weights[e])
        if wgt <= min(internal[a] + k / size[a], internal[b] + k / size[b]):
            union(a, b, wgt)

    if min_size > 1:
        for e in order:
            a = find(int(src[e]))
            b = find(int(dst[e]))
            if a != b and (size[a] < min_size or size[b] < min_size):
                union(a, b, float(weights[e]))

    roots = np.fromiter((find(i) for i in range(h * w)), dtype=np.int64, count=h * w)
    _, first_pos = np.unique(roots, return_index=True)
    order_ids = {roots[p]: rank for rank, p in enumerate(sorted(first_pos))}
    labels = np.fromiter((order_ids[r] for r in roots), dtype=np.int32, count=h * w)
    return LabelMap(labels=labels.reshape(h, w), count=len(order_ids))


def otsu_threshold(gray: np.ndarray, bins: int = 256) -> float | None:
    """Between-class-variance-maximizing threshold; None for flat images."""
    hist, edges = np.histogram(gray.ravel(), bins=bins, range=(0.0, 1.0))
    total = hist.sum()
    if total == 0:
        return None
    centers = 0.5 * (edges[:-1] + edges[1:])
    w0 = np.cumsum(hist)
    w1 = total - w0
    valid = (w0 > 0) & (w1 > 0)
    if not np.any(valid):
        return None
    sum_all = float(np.sum(hist * centers))
    cum = np.cumsum(hist * centers)
    mu0 = np.where(w0 > 0, cum / np.maximum(w0, 1), 0.0)
    mu1 = np.where(w1 > 0, (sum_all - cum) / np.maximum(w1, 1), 0.0)
    var = w0 * w1 * (mu0 - mu1) ** 2
    var[~valid] = -1.0
    best = int(np.argmax(var))
    if var[best] <= 0:
        return None
    return float(edges[best + 1])


def foreground_mask(image: Image) -> np.ndarray | None:
    """Foreground = the Otsu class away from the border-majority background."""
    gray = image.gray()
    t = otsu_threshold(gray)
    if t is None:
        return None
    dark = gray < t
    bg = _border_background(gray)
    mask = dark if bg >= t else ~dark
    if not np.any(mask):
        return None
    return mask


def _disc(radius: int) -> np.ndarray:
    if radius < 1:
        return np.ones((1, 1), dtype=bool)
    span = np.arange(-radius, radius + 1)
    yy, xx = np.meshgrid(span, span, indexing="ij")
    return (yy * yy + xx * xx) <= radius * radius


def _scan_order_labels(mask: np.ndarray, min_area: int) -> LabelMap:
    raw, n_raw = ndimage.label(mask, structure=np.ones((3, 3), dtype=bool))
    labels = np.full(mask.shape, -1, dtype=np.int32)
    if n_raw == 0:
        return LabelMap(labels=labels, count=0)
    flat = raw.ravel()
    uniq, first = np.unique(flat, return_index=True)
    counts = np.bincount(flat, minlength=n_raw + 1)
    pairs = sorted((f, u) for u, f in zip(uniq, first) if u != 0 and counts[u] >= min_area)
    remap = np.full(n_raw + 1, -1, dtype=np.int32)
    for new_id, (_, old) in enumerate(pairs):
        remap[old] = new_id
    labels = remap[raw]
    return LabelMap(labels=labels, count=len(pairs))


def morph_segment(
    image: Image, close_radius: int = 2, min_area: int = 16, open_radius: int = 1
) -> LabelMap:
    """Otsu threshold, disc closing (bridges gaps up to ~2*close_radius),
    then a gentle opening (open_radius, small so closed strokes survive),
    connected motif regions by 8-connectivity; regions below min_area are
    dropped and background stays unassigned (-1)."""
    mask = foreground_mask(image)
    if mask is None:
        return LabelMap(labels=np.full(image.gray().shape, -1, dtype=np.int32), count=0)
    pad = max(close_radius, open_radius) + 1
    if pad > 1:
        padded = np.pad(mask, pad)
        if close_radius >= 1:
            padded = ndimage.binary_closing(padded, structure=_disc(close_radius))
        if open_radius >= 1:
            padded = ndimage.binary_opening(padded, structure=_disc(open_radius))
        mask = padded[pad:-pad, pad:-pad]
    return _scan_order_labels(mask, min_area)
