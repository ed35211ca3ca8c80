"""Catalog records: object metadata binding geometry, imagery and retrieval.

Dates are signed integer year intervals (negative = BC); findspots are
optional (records without coordinates still appear in timeline and graph
views). Ingest is all-or-nothing: the first structural error aborts with
the record index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

from ..errors import CatalogFieldError, DuplicateId


@dataclass(frozen=True)
class CatalogRecord:
    id: str
    name: str = ""
    collection: str = ""
    shape_class: str = ""
    date_from: int = 0
    date_to: int = 0
    findspot: tuple | None = None  # (lat, lon, place)
    fabric: str | None = None
    mass_g: float | None = None
    density_g_per_ml: float | None = None
    image_paths: tuple = field(default_factory=tuple)
    mesh_path: str | None = None
    voxel_path: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be non-empty")
        if self.date_from > self.date_to:
            raise ValueError(f"date_from {self.date_from} > date_to {self.date_to}")
        if self.findspot is not None:
            lat, lon = float(self.findspot[0]), float(self.findspot[1])
            place = self.findspot[2] if len(self.findspot) > 2 else ""
            if not -90 <= lat <= 90:
                raise ValueError(f"latitude {lat} out of range")
            if not -180 <= lon <= 180:
                raise ValueError(f"longitude {lon} out of range")
            object.__setattr__(self, "findspot", (lat, lon, str(place)))
        object.__setattr__(self, "image_paths", tuple(self.image_paths))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["image_paths"] = list(self.image_paths)
        if self.findspot is not None:
            d["findspot"] = {
                "lat": self.findspot[0],
                "lon": self.findspot[1],
                "place": self.findspot[2],
            }
        return d


_REQUIRED = ("id",)
_INT_FIELDS = ("date_from", "date_to")


def _record_from_dict(raw: dict, index: int) -> CatalogRecord:
    if not isinstance(raw, dict):
        raise CatalogFieldError(index, "<record>", "not a JSON object")
    for f in _REQUIRED:
        if f not in raw or raw[f] in (None, ""):
            raise CatalogFieldError(index, f, "missing required field")
    kwargs: dict = {"id": str(raw["id"])}
    for f in ("name", "collection", "shape_class", "fabric", "mesh_path", "voxel_path"):
        if raw.get(f) is not None:
            kwargs[f] = str(raw[f])
    for f in _INT_FIELDS:
        if f in raw and raw[f] is not None:
            try:
                kwargs[f] = int(raw[f])
            except (TypeError, ValueError):
                raise CatalogFieldError(index, f, f"not an integer: {raw[f]!r}")
    for f in ("mass_g", "density_g_per_ml"):
        if raw.get(f) is not None:
            try:
                kwargs[f] = float(raw[f])
            except (TypeError, ValueError):
                raise CatalogFieldError(index, f, f"not a number: {raw[f]!r}")
    fs = raw.get("findspot")
    if fs is not None:
        try:
            if isinstance(fs, dict):
                kwargs["findspot"] = (float(fs["lat"]), float(fs["lon"]), fs.get("place", ""))
            else:
                kwargs["findspot"] = (float(fs[0]), float(fs[1]), fs[2] if len(fs) > 2 else "")
        except (KeyError, IndexError, TypeError, ValueError):
            raise CatalogFieldError(index, "findspot", f"malformed: {fs!r}")
    paths = raw.get("image_paths", [])
    if isinstance(paths, str):
        paths = [paths]
    kwargs["image_paths"] = tuple(str(p) for p in paths)
    try:
        return CatalogRecord(**kwargs)
    except ValueError as exc:
        raise CatalogFieldError(index, "<validation>", str(exc))


def ingest_records(raw_list) -> list[CatalogRecord]:
    """Validate a parsed JSON array into records; all-or-nothing."""
    if not isinstance(raw_list, list):
        raise ValueError("catalog JSON must be an array of records")
    records = [_record_from_dict(raw, i) for i, raw in enumerate(raw_list)]
    seen: dict[str, int] = {}
    for i, rec in enumerate(records):
        if rec.id in seen:
            raise DuplicateId(f"id '{rec.id}' used by records {seen[rec.id]} and {i}")
        seen[rec.id] = i
    return records


def ingest(path) -> list[CatalogRecord]:
    path = Path(path)
    raw = json.loads(path.read_text(encoding="utf-8"))
    return ingest_records(raw)


def serialize_records(records, path=None) -> str:
    """JSON text round-trippable through ingest."""
    text = json.dumps([r.to_dict() for r in records], sort_keys=True, indent=1)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
