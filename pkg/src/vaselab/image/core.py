"""Image value type and IO.

Values live in [0, 1], gray (H, W) or RGB (H, W, 3). PNG (8-bit gray/RGB)
and PGM P5 are accepted on disk.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class Image:
    values: np.ndarray  # (H, W) or (H, W, 3), float64 in [0, 1]

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim == 3 and v.shape[2] == 1:
            v = v[:, :, 0]
        if v.ndim not in (2, 3) or (v.ndim == 3 and v.shape[2] != 3):
            raise ValueError(f"image must be (H,W) or (H,W,3), got {v.shape}")
        if v.size == 0:
            raise ValueError("image must be non-empty")
        if v.min() < -1e-9 or v.max() > 1 + 1e-9:
            raise ValueError("image values must lie in [0, 1]")
        object.__setattr__(self, "values", np.clip(v, 0.0, 1.0))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def channels(self) -> str:
        return "gray" if self.values.ndim == 2 else "RGB"

    def gray(self) -> np.ndarray:
        """Luma-weighted grayscale array."""
        if self.values.ndim == 2:
            return self.values
        return self.values @ np.array([0.299, 0.587, 0.114])


def load_image(path) -> Image:
    from PIL import Image as PILImage

    path = Path(path)
    with PILImage.open(path) as im:
        if im.mode in ("L", "I;16", "I"):
            arr = np.asarray(im.convert("L"), dtype=np.float64) / 255.0
        else:
            arr = np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0
    return Image(arr)


def save_image(image: Image, path) -> None:
    from PIL import Image as PILImage

    arr = (np.clip(image.values, 0, 1) * 255).astype(np.uint8)
    mode = "L" if arr.ndim == 2 else "RGB"
    PILImage.fromarray(arr, mode=mode).save(Path(path))


def _border_background(gray: np.ndarray) -> float:
    border = np.concatenate([gray[0, :], gray[-1, :], gray[1:-1, 0], gray[1:-1, -1]])
    return float(np.median(border))


def to_canonical(image: Image, size: int = 128) -> Image:
    """Aspect-preserving resize plus letterbox padding to size x size gray.

    Padding uses the median border value so the background extends naturally.
    """
    from PIL import Image as PILImage

    g = image.gray()
    h, w = g.shape
    scale = size / max(h, w)
    new_h = max(int(round(h * scale)), 1)
    new_w = max(int(round(w * scale)), 1)
    pil = PILImage.fromarray((g * 255).astype(np.uint8), mode="L")
    pil = pil.resize((new_w, new_h), PILImage.BILINEAR)
    resized = np.asarray(pil, dtype=np.float64) / 255.0
    bg = _border_background(g)
    canvas = np.full((size, size), bg)
    y0 = (size - new_h) // 2
    x0 = (size - new_w) // 2
    canvas[y0 : y0 + new_h, x0 : x0 + new_w] = resized
    return Image(canvas)
