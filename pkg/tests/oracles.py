"""Independent reference implementations used as oracles.

These deliberately avoid the production code paths: explicit loops, plain
Python containers, no incremental bookkeeping. They share only the
documented contracts (edge construction order, gradient convention).
"""

from __future__ import annotations

import numpy as np


# ---- graph segmentation reference ------------------------------------------


def naive_graph_segment(values: np.ndarray, k: float, min_size: int) -> np.ndarray:
    """Reference partition for the adaptive-threshold graph segmentation.

    values: pre-smoothed (H, W) or (H, W, C) floats. Returns per-pixel
    component ids (dense, scan-order). Components live in plain lists of
    pixel sets; internal differences are recomputed from stored merge
    weights with max() on every query.
    """
    if values.ndim == 2:
        values = values[:, :, None]
    h, w, _ = values.shape

    def pid(y, x):
        return y * w + x

    edges = []
    for y in range(h):
        for x in range(w):
            for dy, dx in ((0, 1), (1, 0), (1, 1), (1, -1)):
                ny, nx = y + dy, x + dx
                if 0 <= ny < h and 0 <= nx < w:
                    diff = values[y, x] - values[ny, nx]
                    weight = float(np.sqrt(np.sum(diff * diff)))
                    edges.append((weight, pid(y, x), pid(ny, nx)))
    # stable sort on weight keeps construction order for ties
    order = sorted(range(len(edges)), key=lambda i: edges[i][0])

    comp_of = list(range(h * w))  # pixel -> component slot
    members: list[set | None] = [{i} for i in range(h * w)]
    merge_weights: list[list] = [[] for _ in range(h * w)]

    def internal(slot: int) -> float:
        return max(merge_weights[slot]) if merge_weights[slot] else 0.0

    def merge(sa: int, sb: int, weight: float) -> None:
        if len(members[sa]) < len(members[sb]):
            sa, sb = sb, sa
        members[sa] |= members[sb]
        merge_weights[sa].extend(merge_weights[sb])
        merge_weights[sa].append(weight)
        for p in members[sb]:
            comp_of[p] = sa
        members[sb] = None
        merge_weights[sb] = []

    for i in order:
        weight, a, b = edges[i]
        sa, sb = comp_of[a], comp_of[b]
        if sa == sb:
            continue
        if weight <= min(
            internal(sa) + k / len(members[sa]),
            internal(sb) + k / len(members[sb]),
        ):
            merge(sa, sb, weight)

    if min_size > 1:
        for i in order:
            weight, a, b = edges[i]
            sa, sb = comp_of[a], comp_of[b]
            if sa != sb and (len(members[sa]) < min_size or len(members[sb]) < min_size):
                merge(sa, sb, weight)

    ids: dict[int, int] = {}
    out = np.empty(h * w, dtype=np.int32)
    for p in range(h * w):
        slot = comp_of[p]
        if slot not in ids:
            ids[slot] = len(ids)
        out[p] = ids[slot]
    return out.reshape(h, w)


# ---- HOG reference -----------------------------------------------------------


def naive_hog(gray: np.ndarray, cell=8, block=2, bins=9, clip=0.2, eps=1e-10) -> np.ndarray:
    """Loop-based descriptor over an already-canonical square gray image."""
    h, w = gray.shape
    gx = np.zeros_like(gray)
    gy = np.zeros_like(gray)
    for y in range(h):
        for x in range(w):
            if 0 < x < w - 1:
                gx[y, x] = (gray[y, x + 1] - gray[y, x - 1]) / 2.0
            elif x == 0:
                gx[y, x] = gray[y, 1] - gray[y, 0]
            else:
                gx[y, x] = gray[y, w - 1] - gray[y, w - 2]
            if 0 < y < h - 1:
                gy[y, x] = (gray[y + 1, x] - gray[y - 1, x]) / 2.0
            elif y == 0:
                gy[y, x] = gray[1, x] - gray[0, x]
            else:
                gy[y, x] = gray[h - 1, x] - gray[h - 2, x]

    n = h // cell
    hists = np.zeros((n, n, bins))
    binw = np.pi / bins
    for y in range(h):
        for x in range(w):
            mag = float(np.hypot(gx[y, x], gy[y, x]))
            ang = float(np.arctan2(gy[y, x], gx[y, x])) % np.pi
            pos = ang / binw
            i0 = int(np.floor(pos)) % bins
            frac = pos - np.floor(pos)
            i1 = (i0 + 1) % bins
            cy, cx = y // cell, x // cell
            hists[cy, cx, i0] += mag * (1.0 - frac)
            hists[cy, cx, i1] += mag * frac

    nb = n - block + 1
    out = []
    for by in range(nb):
        for bx in range(nb):
            v = []
            for yy in range(block):
                for xx in range(block):
                    v.extend(hists[by + yy, bx + xx].tolist())
            v = np.asarray(v)
            v = v / np.sqrt(np.sum(v * v) + eps**2)
            v = np.minimum(v, clip)
            v = v / np.sqrt(np.sum(v * v) + eps**2)
            out.append(v)
    return np.concatenate(out)


# ---- misc helpers --------------------------------------------------------------


def partitions_equal(a: np.ndarray, b: np.ndarray) -> bool:
    """Same pixel partition regardless of label numbering."""
    a = a.ravel()
    b = b.ravel()
    fwd: dict = {}
    rev: dict = {}
    for x, y in zip(a.tolist(), b.tolist()):
        if fwd.setdefault(x, y) != y:
            return False
        if rev.setdefault(y, x) != x:
            return False
    return True


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
