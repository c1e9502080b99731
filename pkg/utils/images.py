"""Image output through Pillow (binary PPM, P6, 8-bit RGB)."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from core.errors import OutputNotWritable

__all__ = ["write_ppm"]


def write_ppm(path: str | Path, rgb: np.ndarray) -> Path:
    """Write an (ny, nx, 3) uint8 array, rows top to bottom."""
    path = Path(path)
    arr = np.ascontiguousarray(rgb, dtype=np.uint8)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an (ny, nx, 3) array, got shape {arr.shape}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(arr, "RGB").save(path, format="PPM")
    except OSError as e:
        raise OutputNotWritable(f"cannot write {path}: {e}") from e
    return path
