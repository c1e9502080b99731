"""Common utility helpers used across the project."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["round_sig", "Bounds", "parse_bounds"]


def round_sig(x: float, digits: int = 12) -> float:
    """Round to `digits` significant digits; zero, inf and nan pass through."""
    if x == 0 or not math.isfinite(x):
        return x
    return round(x, digits - 1 - int(math.floor(math.log10(abs(x)))))


@dataclass(frozen=True)
class Bounds:
    """View rectangle in plane units: center and full width/height."""

    center: complex
    width: float
    height: float

    @property
    def xmin(self) -> float:
        return self.center.real - self.width / 2

    @property
    def ymax(self) -> float:
        return self.center.imag + self.height / 2

    def to_json(self) -> dict:
        return {
            "center": [self.center.real, self.center.imag],
            "width": self.width,
            "height": self.height,
        }


def parse_bounds(text: str) -> Bounds:
    """Parse 'cx,cy,w,h' into Bounds. Raises ValueError on bad input."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 4:
        raise ValueError(f"bounds need 4 comma-separated numbers, got {text!r}")
    cx, cy, w, h = (float(p) for p in parts)
    if not (w > 0 and h > 0) or not all(math.isfinite(v) for v in (cx, cy, w, h)):
        raise ValueError(f"bounds width/height must be positive and finite, got {text!r}")
    return Bounds(complex(cx, cy), w, h)
