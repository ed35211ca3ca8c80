"""HTTP JSON service for the exploration client.

All requests are served from an immutable snapshot (catalog, index,
similarity graphs, render cache); a reload builds a fresh snapshot and swaps
one attribute, so no request ever observes a half-loaded state. Responses
are canonical JSON (sorted keys, no whitespace): identical requests return
byte-identical bodies.

Endpoints:
  GET  /api/objects?from=&to=&bbox=
  GET  /api/objects/{id}
  GET  /api/objects/{id}/image | /mesh
  GET  /api/objects/{id}/rollout?proxy=&seam=
  GET  /api/objects/{id}/flatten?iters=&eps=&step=
  GET  /api/graph?kind=&k=
  POST /api/query/sketch   {"polylines": [...], "canvas": [w,h], "kind": k, "k": n}
  POST /api/query/motif    {"image_b64": ..., "kind": k, "k": n}
  POST /api/selection      {"selector": {...}}

Errors share the envelope {"error": msg, "code": code} with status 400
(malformed input), 404 (missing), 422 (semantic), 500 (internal).
"""

from __future__ import annotations

import base64
import hashlib
import io
import json
import signal
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

import numpy as np

from . import errors as err
from .catalog.graph import SimilarityGraph, build_similarity_graph
from .catalog.records import CatalogRecord, ingest
from .catalog.selection import linked_selection
from .errors import BindFailure, LoadFailure, VaselabError
from .flatten import ElasticParams, elastic_flatten, fit_proxy, render_flatmap, unwrap_on_proxy
from .image.core import Image, load_image
from .mesh.axis import estimate_axis
from .mesh.io import load_mesh
from .retrieval.index import DescriptorIndex, load_index
from .retrieval.query import RankedResult, SketchQuery, query


@dataclass(frozen=True)
class ServiceConfig:
    port: int = 8640
    catalog_path: str = "catalog.json"
    index_path: str | None = None
    static_dir: str | None = None
    cache_dir: str | None = None
    data_root: str | None = None  # base for record-relative paths; default: catalog dir
    graph_kind: str = "hog"
    graph_k: int = 6
    host: str = "127.0.0.1"

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port {self.port} out of range [1, 65535]")


class Snapshot:
    """Read-only state shared by all requests."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        try:
            self.records = ingest(config.catalog_path)
        except FileNotFoundError as exc:
            raise LoadFailure(f"catalog not found: {exc}") from exc
        except (ValueError, VaselabError) as exc:
            raise LoadFailure(f"catalog rejected: {exc}") from exc
        self.records_by_id = {r.id: r for r in self.records}
        self.data_root = Path(
            config.data_root if config.data_root else Path(config.catalog_path).parent
        )
        self.index: DescriptorIndex | None = None
        if config.index_path:
            try:
                self.index = load_index(config.index_path)
            except Exception as exc:
                raise LoadFailure(f"index rejected: {exc}") from exc
        self.cache_dir = Path(config.cache_dir) if config.cache_dir else None
        if self.cache_dir:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        self._graphs: dict = {}
        self._graph_lock = threading.Lock()
        self._mesh_cache: dict = {}
        if self.index is not None and self.index.size(config.graph_kind):
            self.graph(config.graph_kind, config.graph_k)  # eager default graph

    def graph(self, kind: str, k: int) -> SimilarityGraph:
        if self.index is None:
            raise err.KindMissing("service has no descriptor index")
        key = (kind, k)
        with self._graph_lock:
            if key not in self._graphs:
                self._graphs[key] = build_similarity_graph(self.index, kind, k)
            return self._graphs[key]

    def default_graph(self) -> SimilarityGraph | None:
        if self.index is None:
            return None
        try:
            return self.graph(self.config.graph_kind, self.config.graph_k)
        except err.KindMissing:
            return None

    def record(self, object_id: str) -> CatalogRecord:
        rec = self.records_by_id.get(object_id)
        if rec is None:
            raise err.UnknownId(f"no object '{object_id}'")
        return rec

    def mesh_for(self, rec: CatalogRecord):
        if not rec.mesh_path:
            raise err.UnknownId(f"object '{rec.id}' has no mesh")
        key = rec.id
        if key not in self._mesh_cache:
            self._mesh_cache[key] = load_mesh(self.data_root / rec.mesh_path)
        return self._mesh_cache[key]


def canonical_json(payload) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _png_bytes(img_array: np.ndarray) -> bytes:
    from PIL import Image as PILImage

    buf = io.BytesIO()
    arr = (np.clip(img_array, 0.0, 1.0) * 255).astype(np.uint8)
    PILImage.fromarray(arr, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


_STATUS_BY_ERROR = [
    (err.UnknownId, 404),
    (err.KindMissing, 404),
    (err.DegenerateSketch, 422),
    (err.NotRevolutionLike, 422),
    (err.Degenerate, 422),
    (err.NoForeground, 422),
    (err.SeamCutFailed, 422),
    (err.FitDiverged, 422),
    (err.NotClosed, 422),
]


def _error_status(exc: Exception) -> int:
    for cls, status in _STATUS_BY_ERROR:
        if isinstance(exc, cls):
            return status
    if isinstance(exc, (ValueError, KeyError, TypeError, json.JSONDecodeError)):
        return 400
    return 500


class _Handler(BaseHTTPRequestHandler):
    server_version = "vaselab/0.1"
    protocol_version = "HTTP/1.1"

    # populated by make_server
    snapshot: Snapshot = None

    def log_message(self, fmt, *args):  # quiet by default
        pass

    # -- plumbing ---------------------------------------------------------

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, payload, status: int = 200) -> None:
        self._send(status, canonical_json(payload), "application/json")

    def _send_error_json(self, exc: Exception) -> None:
        status = _error_status(exc)
        code = type(exc).__name__
        self._send_json({"error": str(exc), "code": code}, status=status)

    def _read_json_body(self):
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b""
        if not raw:
            raise ValueError("empty request body")
        return json.loads(raw)

    # -- dispatch ---------------------------------------------------------

    def do_GET(self):
        try:
            self._route_get()
        except Exception as exc:  # noqa: BLE001 - every error maps to the envelope
            self._send_error_json(exc)

    def do_POST(self):
        try:
            self._route_post()
        except Exception as exc:  # noqa: BLE001
            self._send_error_json(exc)

    def _route_get(self):
        snap = self.snapshot
        parsed = urlparse(self.path)
        qs = {k: v[0] for k, v in parse_qs(parsed.query).items()}
        parts = [p for p in parsed.path.split("/") if p]

        if parts[:2] == ["api", "objects"] and len(parts) == 2:
            return self._send_json(self._objects_listing(qs))
        if parts[:2] == ["api", "objects"] and len(parts) == 3:
            return self._send_json(snap.record(parts[2]).to_dict())
        if parts[:2] == ["api", "objects"] and len(parts) == 4:
            rec = snap.record(parts[2])
            tail = parts[3]
            if tail == "image":
                return self._send_record_file(rec, "image")
            if tail == "mesh":
                return self._send_record_file(rec, "mesh")
            if tail == "rollout":
                return self._send_rollout(rec, qs, relax=False)
            if tail == "flatten":
                return self._send_rollout(rec, qs, relax=True)
            raise err.UnknownId(f"no resource '{tail}'")
        if parts == ["api", "graph"]:
            kind = qs.get("kind", snap.config.graph_kind)
            k = int(qs.get("k", snap.config.graph_k))
            return self._send_json(snap.graph(kind, k).to_dict())
        return self._send_static(parsed.path)

    def _route_post(self):
        snap = self.snapshot
        parts = [p for p in urlparse(self.path).path.split("/") if p]
        body = self._read_json_body()
        if parts == ["api", "query", "sketch"]:
            sketch = SketchQuery(
                polylines=tuple(np.asarray(pl, dtype=np.float64) for pl in body["polylines"]),
                canvas=tuple(body["canvas"]),
            )
            return self._send_json(
                self._ranked(query(
                    self._require_index(), sketch,
                    body.get("kind", "hog"), int(body.get("k", 20)),
                ))
            )
        if parts == ["api", "query", "motif"]:
            raw = base64.b64decode(body["image_b64"])
            from PIL import Image as PILImage

            pil = PILImage.open(io.BytesIO(raw)).convert("RGB")
            image = Image(np.asarray(pil, dtype=np.float64) / 255.0)
            return self._send_json(
                self._ranked(query(
                    self._require_index(), image,
                    body.get("kind", "sc"), int(body.get("k", 20)),
                ))
            )
        if parts == ["api", "selection"]:
            selector = body.get("selector")
            if selector is None:
                raise ValueError("body must hold 'selector'")
            sel = linked_selection(snap.records, snap.default_graph(), selector)
            return self._send_json(sel.to_dict())
        raise err.UnknownId(f"no endpoint {self.path}")

    # -- endpoint bodies ----------------------------------------------------

    def _require_index(self) -> DescriptorIndex:
        if self.snapshot.index is None:
            raise err.KindMissing("service has no descriptor index")
        return self.snapshot.index

    def _objects_listing(self, qs) -> list:
        records = self.snapshot.records
        if "from" in qs or "to" in qs:
            lo = int(qs.get("from", -(10**9)))
            hi = int(qs.get("to", 10**9))
            records = [r for r in records if r.date_from <= hi and r.date_to >= lo]
        if "bbox" in qs:
            lat0, lon0, lat1, lon1 = (float(v) for v in qs["bbox"].split(","))
            records = [
                r
                for r in records
                if r.findspot is not None
                and lat0 <= r.findspot[0] <= lat1
                and lon0 <= r.findspot[1] <= lon1
            ]
        return [r.to_dict() for r in records]

    def _ranked(self, result: RankedResult) -> dict:
        return {
            "kind": result.kind,
            "items": [{"id": oid, "score": score} for oid, score in result.items],
        }

    def _send_record_file(self, rec: CatalogRecord, which: str) -> None:
        snap = self.snapshot
        if which == "image":
            if not rec.image_paths:
                raise err.UnknownId(f"object '{rec.id}' has no image")
            path = snap.data_root / rec.image_paths[0]
            ctype = "image/png"
        else:
            if not rec.mesh_path:
                raise err.UnknownId(f"object '{rec.id}' has no mesh")
            path = snap.data_root / rec.mesh_path
            ctype = "application/octet-stream"
        if not path.exists():
            raise err.UnknownId(f"file for '{rec.id}' missing on disk")
        self._send(200, path.read_bytes(), ctype)

    def _send_rollout(self, rec: CatalogRecord, qs, relax: bool) -> None:
        snap = self.snapshot
        proxy_kind = qs.get("proxy", "auto")
        seam_deg = float(qs.get("seam", 180.0))
        px_per_mm = float(qs.get("px", 2.0))
        iters = int(qs.get("iters", 400))
        step = float(qs.get("step", 1.0))
        eps = float(qs.get("eps", 1e-6))
        key_src = json.dumps(
            [rec.id, proxy_kind, seam_deg, px_per_mm, relax, iters, step, eps]
        )
        key = hashlib.sha256(key_src.encode()).hexdigest()[:24]
        cache_path = snap.cache_dir / f"{key}.png" if snap.cache_dir else None
        if cache_path is not None and cache_path.exists():
            mm = json.loads(cache_path.with_suffix(".png.json").read_text())
            body = cache_path.read_bytes()
            self.send_response(200)
            self.send_header("Content-Type", "image/png")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("X-Mm-Per-Px", str(mm["mm_per_px"]))
            self.end_headers()
            self.wfile.write(body)
            return

        mesh = snap.mesh_for(rec)
        axis = estimate_axis(mesh)
        kind = None if proxy_kind == "auto" else {
            "cyl": "cylinder", "cylinder": "cylinder",
            "cone": "cone", "sphere": "sphere",
        }.get(proxy_kind)
        if proxy_kind != "auto" and kind is None:
            raise ValueError(f"unknown proxy '{proxy_kind}'")
        fit = fit_proxy(mesh, axis, kind)
        flat = unwrap_on_proxy(mesh, fit, seam_angle=np.radians(seam_deg))
        if relax:
            flat = elastic_flatten(
                flat.cut_mesh, flat, ElasticParams(max_iters=iters, step=step, eps=eps)
            )
        overlay = mesh.colors is None
        raster = render_flatmap(flat, px_per_mm=px_per_mm, distortion_overlay=overlay)
        body = _png_bytes(raster)
        mm_per_px = 1.0 / px_per_mm
        if cache_path is not None:
            cache_path.write_bytes(body)
            cache_path.with_suffix(".png.json").write_text(
                json.dumps({"mm_per_px": mm_per_px})
            )
        self.send_response(200)
        self.send_header("Content-Type", "image/png")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("X-Mm-Per-Px", str(mm_per_px))
        self.end_headers()
        self.wfile.write(body)

    def _send_static(self, path: str) -> None:
        static = self.snapshot.config.static_dir
        if not static:
            raise err.UnknownId(f"no endpoint {path}")
        rel = path.lstrip("/") or "index.html"
        full = (Path(static) / rel).resolve()
        if not str(full).startswith(str(Path(static).resolve())) or not full.is_file():
            raise err.UnknownId(f"no static file {path}")
        ctype = {
            ".html": "text/html; charset=utf-8",
            ".js": "text/javascript; charset=utf-8",
            ".css": "text/css; charset=utf-8",
            ".png": "image/png",
            ".json": "application/json",
            ".map": "application/json",
        }.get(full.suffix, "application/octet-stream")
        self._send(200, full.read_bytes(), ctype)


def make_server(config: ServiceConfig):
    """Build the snapshot and bind the server (port 0 picks a free port)."""
    snapshot = Snapshot(config)
    handler = type("BoundHandler", (_Handler,), {"snapshot": snapshot})
    try:
        server = ThreadingHTTPServer((config.host, config.port), handler)
    except OSError as exc:
        raise BindFailure(f"cannot bind {config.host}:{config.port}: {exc}") from exc
    server.daemon_threads = True
    return server, snapshot


def serve(config: ServiceConfig) -> None:
    """Run until SIGINT/SIGTERM; prints the bound address."""
    server, snapshot = make_server(config)
    host, port = server.server_address[:2]
    print(f"vaselab service on http://{host}:{port} "
          f"({len(snapshot.records)} objects)")

    def _stop(signum, frame):
        threading.Thread(target=server.shutdown, daemon=True).start()

    signal.signal(signal.SIGINT, _stop)
    signal.signal(signal.SIGTERM, _stop)
    try:
        server.serve_forever()
    finally:
        server.server_close()
