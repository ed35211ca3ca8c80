"""Mesh file IO.

Supported formats:
  OBJ  ASCII. `v x y z` (optional trailing `r g b` vertex colors), `vt`
       ignored, `f` with 1-based indices (``v``, ``v/vt``, ``v/vt/vn`` and
       ``v//vn`` forms). Polygons with more than 3 corners are fan
       triangulated.
  PLY  binary little-endian. Vertex properties x, y, z as float32 with
       optional uchar red, green, blue; face property
       list(uint8 count, int32 indices). Anything else is rejected with an
       explicit error.

Coordinates are taken as millimeters.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import EmptyMesh, IndexOutOfRange, MeshParseError
from .core import TriangleMesh


def load_mesh(path) -> TriangleMesh:
    """Load an OBJ or PLY mesh, deciding by extension (falls back to sniffing)."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    suffix = path.suffix.lower()
    if suffix == ".obj":
        return load_obj(path)
    if suffix == ".ply":
        return load_ply(path)
    head = path.open("rb").read(4)
    if head[:3] == b"ply":
        return load_ply(path)
    return load_obj(path)


def _fan(indices, line_no):
    if len(indices) < 3:
        raise MeshParseError(f"face with {len(indices)} vertices", line=line_no)
    return [(indices[0], indices[k], indices[k + 1]) for k in range(1, len(indices) - 1)]


def load_obj(path) -> TriangleMesh:
    vertices = []
    colors = []
    triangles = []
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            tag = parts[0]
            if tag == "v":
                if len(parts) not in (4, 7):
                    raise MeshParseError(
                        f"vertex line needs 3 or 6 floats, got {len(parts) - 1}",
                        line=line_no,
                    )
                try:
                    vals = [float(x) for x in parts[1:]]
                except ValueError:
                    raise MeshParseError("non-numeric vertex coordinate", line=line_no)
                vertices.append(vals[:3])
                if len(vals) == 6:
                    colors.append(vals[3:])
            elif tag == "f":
                idx = []
                for token in parts[1:]:
                    head = token.split("/")[0]
                    try:
                        i = int(head)
                    except ValueError:
                        raise MeshParseError(f"bad face index '{token}'", line=line_no)
                    if i == 0:
                        raise MeshParseError("OBJ indices are 1-based", line=line_no)
                    idx.append(i - 1 if i > 0 else len(vertices) + i)
                triangles.extend(_fan(idx, line_no))
            # vt, vn, usemtl, o, g, s, mtllib: ignored
    if not vertices or not triangles:
        raise EmptyMesh(f"{path}: no geometry found")
    v = np.asarray(vertices, dtype=np.float64)
    t = np.asarray(triangles, dtype=np.int64)
    if t.min() < 0 or t.max() >= len(vertices):
        raise IndexOutOfRange(
            f"face references vertex {int(t.max()) + 1} of {len(vertices)}"
        )
    c = None
    if colors:
        if len(colors) != len(vertices):
            raise MeshParseError(
                f"{len(colors)} colored of {len(vertices)} vertices; color must be all-or-none"
            )
        c = np.clip(np.asarray(colors, dtype=np.float64), 0.0, 1.0)
    return TriangleMesh(v, t, c)


_PLY_VERTEX_LAYOUTS = {
    ("x", "y", "z"): False,
    ("x", "y", "z", "red", "green", "blue"): True,
}


def load_ply(path) -> TriangleMesh:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"ply"):
        raise MeshParseError("not a PLY file", offset=0)
    try:
        header_end = data.index(b"end_header\n") + len(b"end_header\n")
    except ValueError:
        raise MeshParseError("PLY header has no end_header", offset=len(data))
    header = data[:header_end].decode("ascii", errors="replace").splitlines()

    fmt = None
    elements = []  # (name, count, [(type, name) or ('list', count_t, idx_t, name)])
    for line in header[1:]:
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "format":
            fmt = parts[1]
        elif parts[0] == "element":
            elements.append((parts[1], int(parts[2]), []))
        elif parts[0] == "property":
            if not elements:
                raise MeshParseError("property before element in PLY header")
            if parts[1] == "list":
                elements[-1][2].append(("list", parts[2], parts[3], parts[4]))
            else:
                elements[-1][2].append((parts[1], parts[2]))
    if fmt != "binary_little_endian":
        raise MeshParseError(
            f"unsupported PLY format '{fmt}'; only binary_little_endian is accepted"
        )

    by_name = {name: (count, props) for name, count, props in elements}
    if "vertex" not in by_name or "face" not in by_name:
        raise MeshParseError("PLY must declare vertex and face elements")

    v_count, v_props = by_name["vertex"]
    names = tuple(p[-1] for p in v_props)
    types = [p[0] for p in v_props]
    if names not in _PLY_VERTEX_LAYOUTS:
        raise MeshParseError(
            f"unsupported vertex layout {names}; expected (x,y,z) or (x,y,z,red,green,blue)"
        )
    has_color = _PLY_VERTEX_LAYOUTS[names]
    if types[:3] != ["float", "float", "float"] and types[:3] != ["float32"] * 3:
        raise MeshParseError("vertex x,y,z must be 32-bit floats")
    if has_color and set(types[3:]) - {"uchar", "uint8"}:
        raise MeshParseError("vertex colors must be uchar")

    f_count, f_props = by_name["face"]
    if len(f_props) != 1 or f_props[0][0] != "list":
        raise MeshParseError("face element must hold a single list property")
    _, count_t, idx_t, _ = f_props[0]
    if count_t not in ("uchar", "uint8") or idx_t not in ("int", "int32"):
        raise MeshParseError(
            f"face list must be (uint8 count, int32 indices), got ({count_t}, {idx_t})"
        )

    # elements appear in declared order
    offset = header_end
    vertices = colors = None
    triangles = []
    for name, count, _props in elements:
        if name == "vertex":
            stride = 12 + (3 if has_color else 0)
            blob = data[offset : offset + stride * count]
            if len(blob) != stride * count:
                raise MeshParseError("truncated vertex data", offset=offset)
            dt = [("x", "<f4"), ("y", "<f4"), ("z", "<f4")]
            if has_color:
                dt += [("red", "u1"), ("green", "u1"), ("blue", "u1")]
            rec = np.frombuffer(blob, dtype=np.dtype(dt))
            vertices = np.stack(
                [rec["x"], rec["y"], rec["z"]], axis=1
            ).astype(np.float64)
            if has_color:
                colors = (
                    np.stack([rec["red"], rec["green"], rec["blue"]], axis=1).astype(
                        np.float64
                    )
                    / 255.0
                )
            offset += stride * count
        elif name == "face":
            for _ in range(count):
                if offset >= len(data):
                    raise MeshParseError("truncated face data", offset=offset)
                n = data[offset]
                offset += 1
                need = 4 * n
                if offset + need > len(data):
                    raise MeshParseError("truncated face indices", offset=offset)
                idx = struct.unpack_from(f"<{n}i", data, offset)
                offset += need
                triangles.extend(_fan(list(idx), None))
        else:
            raise MeshParseError(f"unsupported PLY element '{name}'")

    if vertices is None or not triangles:
        raise EmptyMesh(f"{path}: no geometry found")
    t = np.asarray(triangles, dtype=np.int64)
    if t.min() < 0 or t.max() >= vertices.shape[0]:
        raise IndexOutOfRange(
            f"face references vertex {int(t.max())} of {vertices.shape[0]}"
        )
    return TriangleMesh(vertices, t, colors)


def save_obj(mesh: TriangleMesh, path) -> None:
    """Write ASCII OBJ; vertex colors (if any) as trailing r g b floats."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        if mesh.colors is None:
            for p in mesh.vertices:
                fh.write(f"v {p[0]:.9g} {p[1]:.9g} {p[2]:.9g}\n")
        else:
            for p, c in zip(mesh.vertices, mesh.colors):
                fh.write(
                    f"v {p[0]:.9g} {p[1]:.9g} {p[2]:.9g} "
                    f"{c[0]:.6g} {c[1]:.6g} {c[2]:.6g}\n"
                )
        for tri in mesh.triangles:
            fh.write(f"f {tri[0] + 1} {tri[1] + 1} {tri[2] + 1}\n")
