"""Synthetic demo catalog: silhouette images, metadata, meshes and an index.

Builds a self-contained data directory the service can serve immediately.
Three silhouette families (discs/ellipses, squares, five-pointed stars) with
jittered pose and size, date intervals across the archaic/classical range,
findspots around the Mediterranean, and a few colored revolution meshes for
rollout rendering.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .catalog.records import ingest_records, serialize_records
from .image.core import Image, save_image
from .mesh.generate import revolution_mesh, striped_colors, vessel_profile
from .mesh.core import TriangleMesh
from .mesh.io import save_obj
from .retrieval.index import build_index, save_index

FAMILIES = ("disc", "square", "star")

_SITES = [
    ("Athens", 37.98, 23.73),
    ("Corinth", 37.91, 22.88),
    ("Syracuse", 37.08, 15.28),
    ("Cyrene", 32.82, 21.86),
    ("Naukratis", 30.90, 30.59),
    ("Rhodes", 36.43, 28.22),
    ("Taranto", 40.47, 17.24),
    ("Marseille", 43.30, 5.37),
]


def _family_mask(kind: str, rng: np.random.Generator, size: int = 128) -> np.ndarray:
    yy, xx = np.mgrid[0:size, 0:size].astype(float)
    cy = size / 2 + rng.uniform(-6, 6)
    cx = size / 2 + rng.uniform(-6, 6)
    y, x = yy - cy, xx - cx
    if kind == "disc":
        a = rng.uniform(size * 0.22, size * 0.34)
        b = a * rng.uniform(0.8, 1.0)
        ang = rng.uniform(0, np.pi)
        yr = y * np.cos(ang) + x * np.sin(ang)
        xr = -y * np.sin(ang) + x * np.cos(ang)
        return (yr / a) ** 2 + (xr / b) ** 2 < 1
    if kind == "square":
        s = rng.uniform(size * 0.20, size * 0.31)
        ang = rng.uniform(-0.3, 0.3)
        yr = y * np.cos(ang) + x * np.sin(ang)
        xr = -y * np.sin(ang) + x * np.cos(ang)
        return (np.abs(yr) < s) & (np.abs(xr) < s * rng.uniform(0.75, 1.0))
    r = np.hypot(y, x)
    th = np.arctan2(y, x)
    base = rng.uniform(size * 0.17, size * 0.25)
    amp = rng.uniform(0.35, 0.5)
    return r < base * (1 + amp * np.cos(5 * (th + rng.uniform(0, 2 * np.pi))))


def build_demo_catalog(
    out_dir,
    n_objects: int = 60,
    n_meshes: int = 6,
    kinds=("hog", "scd"),
    seed: int = 0,
) -> Path:
    """Write images/, meshes/, catalog.json and index.zip under out_dir.

    Returns the catalog path.
    """
    out = Path(out_dir)
    (out / "images").mkdir(parents=True, exist_ok=True)
    (out / "meshes").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    raw = []
    for i in range(n_objects):
        family = FAMILIES[i % len(FAMILIES)]
        oid = f"obj-{i:04d}"
        mask = _family_mask(family, rng)
        img_rel = f"images/{oid}.png"
        save_image(Image(np.where(mask, 0.0, 1.0)), out / img_rel)
        site = _SITES[int(rng.integers(len(_SITES)))]
        year = int(rng.integers(-700, -400))
        rec = {
            "id": oid,
            "name": f"{family} vessel {i}",
            "collection": f"Collection {chr(ord('A') + i % 5)}",
            "shape_class": family,
            "date_from": year,
            "date_to": year + int(rng.integers(10, 60)),
            "image_paths": [img_rel],
        }
        if rng.random() > 0.1:  # some records legitimately lack findspots
            rec["findspot"] = {
                "lat": site[1] + float(rng.uniform(-0.2, 0.2)),
                "lon": site[2] + float(rng.uniform(-0.2, 0.2)),
                "place": site[0],
            }
        if rng.random() > 0.5:
            rec["fabric"] = rng.choice(["attic", "corinthian", "laconian"])
            rec["mass_g"] = float(np.round(rng.uniform(300, 2500), 1))
            rec["density_g_per_ml"] = float(np.round(rng.uniform(1.4, 2.1), 2))
        raw.append(rec)

    for i in range(min(n_meshes, n_objects)):
        samples = vessel_profile(
            height=float(rng.uniform(90, 160)),
            max_radius=float(rng.uniform(35, 55)),
            neck_radius=float(rng.uniform(10, 20)),
            n=80,
        )
        mesh = revolution_mesh(samples, n_theta=72, close_caps=False)
        mesh = TriangleMesh(
            mesh.vertices, mesh.triangles, striped_colors(mesh, period_mm=18.0)
        )
        rel = f"meshes/obj-{i:04d}.obj"
        save_obj(mesh, out / rel)
        raw[i]["mesh_path"] = rel

    records = ingest_records(raw)
    catalog_path = out / "catalog.json"
    serialize_records(records, catalog_path)

    index = build_index(records, kinds, image_root=out)
    save_index(index, out / "index.zip")

    (out / "demo_manifest.json").write_text(
        json.dumps(
            {
                "objects": n_objects,
                "meshes": min(n_meshes, n_objects),
                "kinds": list(kinds),
                "seed": seed,
            },
            sort_keys=True,
        )
    )
    return catalog_path
