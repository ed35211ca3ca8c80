"""Command-line surface for every pipeline.

Results print as JSON on stdout; file outputs go where --out points.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np


def _print(payload) -> None:
    print(json.dumps(payload, sort_keys=True, indent=1))


def _load(path):
    from .mesh.io import load_mesh

    return load_mesh(path)


def _axis_payload(axis) -> dict:
    return {
        "point_mm": [float(v) for v in axis.point],
        "direction": [float(v) for v in axis.direction],
        "fit_rms_mm": axis.fit_rms,
        "direction_ambiguous": axis.direction_ambiguous,
    }


# ---- mesh ----------------------------------------------------------------

def cmd_mesh(args) -> int:
    from .mesh.core import mesh_area, mesh_volume, validate_mesh
    from .mesh.axis import estimate_axis
    from .mesh.profile import extract_profile

    mesh = _load(args.path)
    if args.what == "info":
        rep = validate_mesh(mesh)
        _print(
            {
                "vertices": mesh.n_vertices,
                "triangles": mesh.n_triangles,
                "is_manifold": rep.is_manifold,
                "is_closed": rep.is_closed,
                "boundary_edges": rep.boundary_edge_count,
                "components": rep.connected_component_count,
                "bbox_mm": [list(map(float, c)) for c in rep.bbox],
                "area_mm2": mesh_area(mesh),
                "degenerate_triangles": rep.degenerate_triangle_count,
            }
        )
    elif args.what == "volume":
        _print({"volume_ml": mesh_volume(mesh)})
    elif args.what == "axis":
        _print(_axis_payload(estimate_axis(mesh)))
    elif args.what == "profile":
        axis = estimate_axis(mesh)
        profile = extract_profile(mesh, axis, args.bins)
        _print(
            {
                "axis": _axis_payload(axis),
                "samples": [[float(z), float(r)] for z, r in profile.samples],
            }
        )
    return 0


# ---- rollout / flatten -------------------------------------------------------

_PROXY_NAMES = {"auto": None, "cyl": "cylinder", "cone": "cone", "sphere": "sphere"}


def _unwrap(args):
    from .mesh.axis import estimate_axis
    from .flatten import fit_proxy, unwrap_on_proxy

    mesh = _load(args.path)
    axis = estimate_axis(mesh)
    fit = fit_proxy(mesh, axis, _PROXY_NAMES[args.proxy])
    flat = unwrap_on_proxy(mesh, fit, seam_angle=np.radians(args.seam_deg))
    return mesh, fit, flat


def _emit_flatmap(flat, args) -> dict:
    from .flatten import export_flatmap_obj, render_flatmap, save_render_png

    out = {}
    if args.out:
        export_flatmap_obj(flat, Path(args.out))
        out["obj"] = str(args.out)
        out["distortion_csv"] = str(Path(args.out).with_suffix(".csv"))
    if args.png:
        overlay = flat.cut_mesh.colors is None
        img = render_flatmap(flat, px_per_mm=args.px_per_mm, distortion_overlay=overlay)
        save_render_png(img, args.png, mm_per_px=1.0 / args.px_per_mm)
        out["png"] = str(args.png)
    return out


def cmd_rollout(args) -> int:
    _, fit, flat = _unwrap(args)
    payload = {
        "proxy": fit.kind,
        "rms_mm": fit.rms,
        "triangles": int(flat.cut_mesh.n_triangles),
        "max_angular_distortion": float(np.nanmax(flat.angular)),
        "mean_areal_distortion": float(np.nanmean(flat.areal)),
    }
    payload.update(_emit_flatmap(flat, args))
    _print(payload)
    return 0


def cmd_flatten(args) -> int:
    from .flatten import ElasticParams, elastic_flatten

    _, fit, flat = _unwrap(args)
    relaxed = elastic_flatten(
        flat.cut_mesh,
        flat,
        ElasticParams(max_iters=args.iters, step=args.step, eps=args.eps),
    )
    payload = {
        "proxy": fit.kind,
        "iterations": int(len(relaxed.energy_history) - 1),
        "energy_initial": float(relaxed.energy_history[0]),
        "energy_final": float(relaxed.energy_history[-1]),
        "max_angular_distortion_init": float(np.nanmax(flat.angular)),
        "max_angular_distortion": float(np.nanmax(relaxed.angular)),
    }
    payload.update(_emit_flatmap(relaxed, args))
    _print(payload)
    return 0


# ---- capacity ----------------------------------------------------------------

def cmd_capacity(args) -> int:
    from . import capacity as cap
    from .mesh.axis import estimate_axis
    from .mesh.profile import extract_profile

    if args.method == "revolve":
        mesh = _load(args.path)
        axis = estimate_axis(mesh)
        profile = extract_profile(mesh, axis, args.bins)
        result = cap.volume_of_revolution(profile)
    elif args.method == "inner":
        mesh = _load(args.path)
        if args.cap_rim:
            mesh = cap.cap_rim(mesh)
        result = cap.capacity_inner_mesh(mesh)
    elif args.method == "offset":
        result = cap.capacity_offset(_load(args.path), args.thickness)
    else:  # mass-density
        result = cap.capacity_mass_density(_load(args.path), args.mass, args.density)
    _print(result.to_dict())
    return 0


# ---- ct -----------------------------------------------------------------------

def cmd_ct(args) -> int:
    from .voxel import cavity_capacity, load_voxel_grid, porosity_stats

    grid = load_voxel_grid(args.grid)
    if args.what == "porosity":
        rep = porosity_stats(grid, args.threshold)
        _print(
            {
                "porosity_fraction": rep.porosity_fraction,
                "envelope_voxels": rep.envelope_voxels,
                "void_count": len(rep.components),
                "voids": [
                    {
                        "label": c.label,
                        "voxel_count": c.voxel_count,
                        "volume_mm3": c.volume_mm3,
                        "centroid_mm": [float(v) for v in c.centroid],
                        "elongation": c.elongation,
                        "principal_axis": [float(v) for v in c.principal_axes[0]],
                    }
                    for c in rep.components
                ],
            }
        )
    else:  # capacity
        plane = None
        if args.cap_plane:
            plane = tuple(float(v) for v in args.cap_plane.split(","))
            if len(plane) != 4:
                raise SystemExit("--cap-plane needs a,b,c,d")
        result = cavity_capacity(grid, args.threshold, cap_plane=plane)
        _print(result.to_dict())
    return 0


# ---- register / series ---------------------------------------------------------

def cmd_register(args) -> int:
    from .registration import RegistrationParams, register_similarity

    res = register_similarity(
        _load(args.source),
        _load(args.target),
        RegistrationParams(with_scale=args.scale),
    )
    _print(
        {
            "scale": res.transform.scale,
            "rotation": [[float(v) for v in row] for row in res.transform.rotation],
            "translation_mm": [float(v) for v in res.transform.translation],
            "rms_mm": res.rms,
            "inlier_fraction": res.inlier_fraction,
            "converged": res.converged,
            "max_distance_mm": float(res.distance_map.max()),
        }
    )
    return 0


def cmd_series(args) -> int:
    from .registration import detect_series

    meshes = []
    for path in sorted(Path(args.directory).iterdir()):
        if path.suffix.lower() in (".obj", ".ply"):
            meshes.append((path.stem, _load(path)))
    if not meshes:
        raise SystemExit(f"no meshes found in {args.directory}")
    groups = detect_series(meshes)
    _print(
        {
            "groups": [
                {
                    "members": list(g.member_ids),
                    "pairwise_scales": [
                        {"taller": a, "shorter": b, "scale": s}
                        for a, b, s in g.pairwise_scales
                    ],
                }
                for g in groups
            ]
        }
    )
    return 0


# ---- segment / descr -------------------------------------------------------------

def cmd_segment(args) -> int:
    from .image import egbis_segment, load_image, morph_segment

    image = load_image(args.path)
    if args.algo == "egbis":
        lm = egbis_segment(image, k=args.k, sigma=args.sigma, min_size=args.min_size)
    else:
        lm = morph_segment(image, close_radius=args.close_radius, min_area=args.min_area)
    payload = {"segments": lm.count, "areas": lm.region_areas().tolist()}
    if args.out:
        _save_labelmap(lm, args.out)
        payload["png"] = str(args.out)
        payload["regions_json"] = str(Path(args.out).with_suffix(".json"))
    _print(payload)
    return 0


def _save_labelmap(lm, path) -> None:
    from PIL import Image as PILImage

    rng = np.random.default_rng(0)
    lut = rng.integers(40, 255, size=(max(lm.count, 1), 3), dtype=np.uint8)
    h, w = lm.labels.shape
    rgb = np.zeros((h, w, 3), dtype=np.uint8)
    mask = lm.labels >= 0
    rgb[mask] = lut[lm.labels[mask] % len(lut)]
    PILImage.fromarray(rgb, "RGB").save(path)
    regions = [
        {"id": i, "area_px": int(a)} for i, a in enumerate(lm.region_areas())
    ]
    Path(path).with_suffix(".json").write_text(
        json.dumps({"count": lm.count, "regions": regions}, sort_keys=True)
    )


def cmd_descr(args) -> int:
    from .image import hog, load_image, scd, shape_context, silhouette

    image = load_image(args.path)
    if args.kind == "hog":
        d = hog(image)
        _print({"kind": "hog", "length": len(d.vector), "vector": d.vector.tolist()})
    elif args.kind == "scd":
        d = scd(silhouette(image))
        _print({"kind": "scd", "scales": d.signature.shape[0], "signature": d.signature.tolist()})
    else:
        s = shape_context(silhouette(image))
        _print({"kind": "sc", "samples": s.n_samples, "histograms": s.histograms.tolist()})
    return 0


# ---- index --------------------------------------------------------------------

def cmd_index(args) -> int:
    from .catalog.records import ingest
    from .retrieval import build_index, load_index, query, save_index

    if args.what == "build":
        records = ingest(args.catalog)
        index = build_index(
            records, args.kinds.split(","), image_root=Path(args.catalog).parent
        )
        save_index(index, args.out)
        _print(
            {
                "entries": {k: index.size(k) for k in index.kinds()},
                "warnings": index.warnings,
                "path": str(args.out),
            }
        )
    else:  # query
        from .image import load_image

        index = load_index(args.index)
        result = query(index, load_image(args.query_image), args.kind, args.k)
        _print(
            {
                "kind": result.kind,
                "items": [{"id": i, "score": s} for i, s in result.items],
            }
        )
    return 0


# ---- serve / demo ----------------------------------------------------------------

def cmd_serve(args) -> int:
    from .service import ServiceConfig, serve

    serve(
        ServiceConfig(
            port=args.port,
            host=args.host,
            catalog_path=args.catalog,
            index_path=args.index,
            static_dir=args.static,
            cache_dir=args.cache,
            graph_kind=args.graph_kind,
            graph_k=args.graph_k,
        )
    )
    return 0


def cmd_demo(args) -> int:
    from .demo import build_demo_catalog

    catalog = build_demo_catalog(
        args.out, n_objects=args.objects, n_meshes=args.meshes, seed=args.seed
    )
    _print({"catalog": str(catalog), "index": str(Path(args.out) / "index.zip")})
    return 0


# ---- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vaselab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("mesh", help="inspect a mesh")
    m.add_argument("what", choices=["info", "volume", "axis", "profile"])
    m.add_argument("path")
    m.add_argument("--bins", type=int, default=64)
    m.set_defaults(func=cmd_mesh)

    r = sub.add_parser("rollout", help="naive proxy rollout")
    r.add_argument("path")
    r.add_argument("--proxy", choices=list(_PROXY_NAMES), default="auto")
    r.add_argument("--seam-deg", dest="seam_deg", type=float, default=180.0)
    r.add_argument("--out", help="flat map OBJ (+ distortion CSV sidecar)")
    r.add_argument("--png", help="raster PNG (+ scale JSON sidecar)")
    r.add_argument("--px-per-mm", dest="px_per_mm", type=float, default=2.0)
    r.set_defaults(func=cmd_rollout)

    f = sub.add_parser("flatten", help="elastic relaxation of the rollout")
    f.add_argument("path")
    f.add_argument("--proxy", choices=list(_PROXY_NAMES), default="auto")
    f.add_argument("--seam-deg", dest="seam_deg", type=float, default=180.0)
    f.add_argument("--iters", type=int, default=2000)
    f.add_argument("--eps", type=float, default=1e-6)
    f.add_argument("--step", type=float, default=0.5)
    f.add_argument("--out")
    f.add_argument("--png")
    f.add_argument("--px-per-mm", dest="px_per_mm", type=float, default=2.0)
    f.set_defaults(func=cmd_flatten)

    c = sub.add_parser("capacity", help="filling volume")
    csub = c.add_subparsers(dest="method", required=True)
    cr = csub.add_parser("revolve")
    cr.add_argument("path")
    cr.add_argument("--bins", type=int, default=100)
    ci = csub.add_parser("inner")
    ci.add_argument("path")
    ci.add_argument("--cap-rim", dest="cap_rim", action="store_true")
    co = csub.add_parser("offset")
    co.add_argument("path")
    co.add_argument("--thickness", type=float, required=True)
    cm = csub.add_parser("mass-density")
    cm.add_argument("path")
    cm.add_argument("--mass", type=float, required=True)
    cm.add_argument("--density", type=float, required=True)
    for sp in (cr, ci, co, cm):
        sp.set_defaults(func=cmd_capacity)

    ct = sub.add_parser("ct", help="voxel grid analysis")
    ct.add_argument("what", choices=["porosity", "capacity"])
    ct.add_argument("grid", help="JSON header of the voxel grid")
    ct.add_argument("--threshold", type=float, required=True)
    ct.add_argument("--cap-plane", dest="cap_plane", help="a,b,c,d in mm")
    ct.set_defaults(func=cmd_ct)

    rg = sub.add_parser("register", help="similarity registration")
    rg.add_argument("source")
    rg.add_argument("target")
    rg.add_argument("--scale", action="store_true", help="estimate scale (similarity, not rigid)")
    rg.set_defaults(func=cmd_register)

    se = sub.add_parser("series", help="detect mould series in a directory of meshes")
    se.add_argument("directory")
    se.set_defaults(func=cmd_series)

    sg = sub.add_parser("segment", help="motif segmentation")
    sg.add_argument("algo", choices=["egbis", "morph"])
    sg.add_argument("path")
    sg.add_argument("--k", type=float, default=500.0)
    sg.add_argument("--sigma", type=float, default=0.8)
    sg.add_argument("--min-size", dest="min_size", type=int, default=20)
    sg.add_argument("--close-radius", dest="close_radius", type=int, default=2)
    sg.add_argument("--min-area", dest="min_area", type=int, default=16)
    sg.add_argument("--out", help="label map PNG (+ region table JSON)")
    sg.set_defaults(func=cmd_segment)

    de = sub.add_parser("descr", help="descriptor extraction")
    de.add_argument("kind", choices=["hog", "scd", "sc"])
    de.add_argument("path")
    de.set_defaults(func=cmd_descr)

    ix = sub.add_parser("index", help="descriptor index")
    ixsub = ix.add_subparsers(dest="what", required=True)
    ib = ixsub.add_parser("build")
    ib.add_argument("catalog")
    ib.add_argument("--kinds", default="hog,scd")
    ib.add_argument("--out", default="index.zip")
    iq = ixsub.add_parser("query")
    iq.add_argument("index")
    iq.add_argument("query_image")
    iq.add_argument("--kind", default="hog")
    iq.add_argument("--k", type=int, default=20)
    for sp in (ib, iq):
        sp.set_defaults(func=cmd_index)

    sv = sub.add_parser("serve", help="HTTP JSON service")
    sv.add_argument("--port", type=int, default=8640)
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--catalog", required=True)
    sv.add_argument("--index")
    sv.add_argument("--static")
    sv.add_argument("--cache")
    sv.add_argument("--graph-kind", dest="graph_kind", default="hog")
    sv.add_argument("--graph-k", dest="graph_k", type=int, default=6)
    sv.set_defaults(func=cmd_serve)

    dm = sub.add_parser("demo", help="generate a synthetic demo catalog")
    dm.add_argument("--out", required=True)
    dm.add_argument("--objects", type=int, default=60)
    dm.add_argument("--meshes", type=int, default=6)
    dm.add_argument("--seed", type=int, default=0)
    dm.set_defaults(func=cmd_demo)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(json.dumps({"error": str(exc), "code": type(exc).__name__}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
