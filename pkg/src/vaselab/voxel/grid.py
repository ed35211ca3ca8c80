"""Voxel grid representation and IO.

On disk a grid is a raw little-endian blob in x-fastest order plus a JSON
header: {"dims": [nx, ny, nz], "spacing_mm": [sx, sy, sz],
"dtype": "u8"|"u16"|"f32", "order": "x-fastest", "raw": "<filename>"}.
In memory values are an (nx, ny, nz) array indexed [x, y, z].
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_DTYPES = {"u8": "<u1", "u16": "<u2", "f32": "<f4"}
_DTYPE_NAMES = {np.dtype("<u1"): "u8", np.dtype("<u2"): "u16", np.dtype("<f4"): "f32"}


@dataclass(frozen=True)
class VoxelGrid:
    """Scalar 3D lattice with physical spacing in mm/voxel."""

    values: np.ndarray  # (nx, ny, nz)
    spacing: tuple  # (sx, sy, sz) mm

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 3:
            raise ValueError(f"values must be 3D, got shape {v.shape}")
        if v.size == 0:
            raise ValueError("grid must contain at least one voxel")
        sp = tuple(float(s) for s in self.spacing)
        if len(sp) != 3 or any(s <= 0 for s in sp):
            raise ValueError(f"spacing must be three positive numbers, got {self.spacing}")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "spacing", sp)

    @property
    def dims(self) -> tuple:
        return self.values.shape

    @property
    def voxel_volume_mm3(self) -> float:
        sx, sy, sz = self.spacing
        return sx * sy * sz


@dataclass(frozen=True)
class BinaryGrid:
    """Material(True)/air(False) mask with the same count law as VoxelGrid."""

    bits: np.ndarray  # (nx, ny, nz) bool
    spacing: tuple

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=bool)
        if b.ndim != 3:
            raise ValueError(f"bits must be 3D, got shape {b.shape}")
        sp = tuple(float(s) for s in self.spacing)
        if len(sp) != 3 or any(s <= 0 for s in sp):
            raise ValueError("spacing must be three positive numbers")
        object.__setattr__(self, "bits", b)
        object.__setattr__(self, "spacing", sp)

    @property
    def dims(self) -> tuple:
        return self.bits.shape

    @property
    def voxel_volume_mm3(self) -> float:
        sx, sy, sz = self.spacing
        return sx * sy * sz


def binarize(grid: VoxelGrid, threshold: float) -> BinaryGrid:
    """Material where value >= threshold."""
    return BinaryGrid(bits=grid.values >= threshold, spacing=grid.spacing)


def save_voxel_grid(grid: VoxelGrid, stem) -> Path:
    """Write <stem>.json + <stem>.raw; returns the header path."""
    stem = Path(stem)
    dtype = np.asarray(grid.values).dtype
    key = _DTYPE_NAMES.get(np.dtype(dtype.str.replace(">", "<")))
    if key is None:
        # default float32 for anything exotic
        key = "f32"
    out_dtype = np.dtype(_DTYPES[key])
    nx, ny, nz = grid.dims
    raw_path = stem.with_suffix(".raw")
    header_path = stem.with_suffix(".json")
    blob = np.ascontiguousarray(
        grid.values.transpose(2, 1, 0).astype(out_dtype)
    )  # (nz, ny, nx) C-order == x-fastest
    raw_path.write_bytes(blob.tobytes())
    header_path.write_text(
        json.dumps(
            {
                "dims": [nx, ny, nz],
                "spacing_mm": list(grid.spacing),
                "dtype": key,
                "order": "x-fastest",
                "raw": raw_path.name,
            },
            sort_keys=True,
        )
    )
    return header_path


def load_voxel_grid(header_path) -> VoxelGrid:
    header_path = Path(header_path)
    header = json.loads(header_path.read_text())
    for field in ("dims", "spacing_mm", "dtype"):
        if field not in header:
            raise ValueError(f"voxel header missing '{field}'")
    if header.get("order", "x-fastest") != "x-fastest":
        raise ValueError(f"unsupported voxel order '{header.get('order')}'")
    if header["dtype"] not in _DTYPES:
        raise ValueError(f"unsupported voxel dtype '{header['dtype']}'")
    nx, ny, nz = (int(d) for d in header["dims"])
    raw_name = header.get("raw", header_path.with_suffix(".raw").name)
    raw_path = header_path.parent / raw_name
    blob = np.frombuffer(raw_path.read_bytes(), dtype=_DTYPES[header["dtype"]])
    if blob.size != nx * ny * nz:
        raise ValueError(
            f"raw blob holds {blob.size} values, header promises {nx * ny * nz}"
        )
    values = blob.reshape(nz, ny, nx).transpose(2, 1, 0)
    return VoxelGrid(values=values, spacing=tuple(header["spacing_mm"]))
