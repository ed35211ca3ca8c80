"""Descriptor index: per-object feature payloads plus their metrics.

Kinds:
  hog  gradient-orientation block descriptor, Euclidean metric
  scd  multi-scale turning-angle silhouette signature, cyclic-aligned L1
  sc   shape-context histogram set, mean chi-squared under optimal assignment

Persistence: one zip file holding manifest.json (version, kinds, ids,
params) and one .npy payload per kind.
"""

from __future__ import annotations

import io
import json
import zipfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..errors import EmptyCatalog, KindMissing
from ..image.core import Image, load_image
from ..image.contour import silhouette
from ..image.hog import HogParams, hog
from ..image.scd import scd, scd_distance, SilhouetteDescriptor
from ..image.shape_context import shape_context

KINDS = ("hog", "scd", "sc")
INDEX_VERSION = 1


@dataclass
class DescriptorIndex:
    """Immutable after build; one entry per (object, kind)."""

    ids: dict = field(default_factory=dict)  # kind -> list of object ids
    payloads: dict = field(default_factory=dict)  # kind -> ndarray
    warnings: list = field(default_factory=list)

    def kinds(self) -> list[str]:
        return [k for k in KINDS if k in self.ids and len(self.ids[k])]

    def size(self, kind: str) -> int:
        return len(self.ids.get(kind, []))

    def require_kind(self, kind: str) -> None:
        if kind not in KINDS:
            raise KindMissing(f"unknown descriptor kind '{kind}'")
        if self.size(kind) == 0:
            raise KindMissing(f"index holds no '{kind}' entries")


def describe_image(image: Image, kind: str):
    """Compute the payload array for one image under one kind."""
    if kind == "hog":
        return hog(image).vector
    if kind == "scd":
        return scd(silhouette(image)).signature
    if kind == "sc":
        return shape_context(silhouette(image)).histograms
    raise KindMissing(f"unknown descriptor kind '{kind}'")


def metric_distances(kind: str, query_payload, payloads: np.ndarray) -> np.ndarray:
    """Distances from one query payload to every stored payload."""
    if kind == "hog":
        return np.linalg.norm(payloads - query_payload[None, :], axis=1)
    if kind == "scd":
        n = query_payload.shape[1]
        q = SilhouetteDescriptor(signature=query_payload, n_points=n)
        return np.array(
            [
                scd_distance(q, SilhouetteDescriptor(signature=p, n_points=n))
                for p in payloads
            ]
        )
    if kind == "sc":
        out = np.empty(len(payloads))
        for i, p in enumerate(payloads):
            ha = query_payload[:, None, :]
            hb = p[None, :, :]
            denom = ha + hb
            with np.errstate(divide="ignore", invalid="ignore"):
                cost = 0.5 * np.where(denom > 0, (ha - hb) ** 2 / denom, 0.0).sum(axis=2)
            rows, cols = linear_sum_assignment(cost)
            out[i] = cost[rows, cols].mean()
        return out
    raise KindMissing(f"unknown descriptor kind '{kind}'")


def build_index(records, kinds, image_root=None) -> DescriptorIndex:
    """Compute descriptors for every record and requested kind.

    records: iterable with .id and .image_paths (catalog records or
    anything shaped like them). Per-object failures are recorded as warnings
    and skipped, never fatal.
    """
    records = list(records)
    if not records:
        raise EmptyCatalog("no records to index")
    kinds = list(kinds)
    if not kinds:
        raise ValueError("kinds must be a non-empty set of descriptor kinds")
    for kind in kinds:
        if kind not in KINDS:
            raise KindMissing(f"unknown descriptor kind '{kind}'")

    index = DescriptorIndex()
    staging = {kind: ([], []) for kind in kinds}  # ids, payload list
    for rec in records:
        paths = getattr(rec, "image_paths", None) or []
        if not paths:
            index.warnings.append(f"{rec.id}: no image")
            continue
        path = Path(image_root) / paths[0] if image_root else Path(paths[0])
        try:
            image = load_image(path)
        except Exception as exc:
            index.warnings.append(f"{rec.id}: unreadable image ({exc})")
            continue
        for kind in kinds:
            try:
                payload = describe_image(image, kind)
            except Exception as exc:
                index.warnings.append(f"{rec.id}: {kind} failed ({exc})")
                continue
            staging[kind][0].append(rec.id)
            staging[kind][1].append(payload)
    for kind in kinds:
        ids, payloads = staging[kind]
        index.ids[kind] = ids
        index.payloads[kind] = np.asarray(payloads) if payloads else np.zeros((0,))
    return index


def save_index(index: DescriptorIndex, path) -> None:
    path = Path(path)
    manifest = {
        "version": INDEX_VERSION,
        "kinds": index.kinds(),
        "ids": {k: index.ids[k] for k in index.kinds()},
        "params": {"hog": vars(HogParams())},
        "warnings": index.warnings,
    }
    with zipfile.ZipFile(path, "w", zipfile.ZIP_DEFLATED) as zf:
        zf.writestr("manifest.json", json.dumps(manifest, sort_keys=True))
        for kind in index.kinds():
            buf = io.BytesIO()
            np.save(buf, index.payloads[kind])
            zf.writestr(f"{kind}.npy", buf.getvalue())


def load_index(path) -> DescriptorIndex:
    path = Path(path)
    with zipfile.ZipFile(path, "r") as zf:
        manifest = json.loads(zf.read("manifest.json"))
        if manifest.get("version") != INDEX_VERSION:
            raise ValueError(
                f"index version {manifest.get('version')} unsupported (want {INDEX_VERSION})"
            )
        index = DescriptorIndex(warnings=list(manifest.get("warnings", [])))
        for kind in manifest["kinds"]:
            index.ids[kind] = list(manifest["ids"][kind])
            index.payloads[kind] = np.load(io.BytesIO(zf.read(f"{kind}.npy")))
    return index
