"""groups.py

Reflection-group circle maps: the Nielsen map of the ideal triangle and
its cube quotient, the anti-Farey map.

Features:
- GeodesicReflection: anti-Moebius reflection in a circle orthogonal to the
  unit circle, built from its two ideal endpoints
- nielsen(), anti_farey() with region tests against the three geodesics
- nielsen_circle_derivative(), circle_winding(): circle-restriction checks
- group_raster(): tiling ranks (reflections needed to reach the
  fundamental domain) or Apollonian basins over a view rectangle
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from catalog.apollonian import apollonian_basins
from config import RENDER_MAX_ITER, RENDER_RES
from core.dynamics import BAND, DROPLET, NONESCAPING, raster_rgb
from core.errors import InsideFundamentalDomain, InvalidInput
from utils.helpers import Bounds
from utils.logging import log

__all__ = [
    "GeodesicReflection",
    "NIELSEN_GEODESICS",
    "nielsen",
    "anti_farey",
    "nielsen_circle_derivative",
    "circle_winding",
    "ideal_triangle_boundary",
    "GroupRaster",
    "group_raster",
]

OMEGA = cmath.exp(2j * math.pi / 3)
_REGION_SLACK = 1e-9


@dataclass(frozen=True)
class GeodesicReflection:
    """Circle |z - center| = radius with |center|^2 = radius^2 + 1."""

    center: complex
    radius: float

    @classmethod
    def through(cls, a: complex, b: complex) -> "GeodesicReflection":
        """The geodesic with ideal endpoints a, b on the unit circle."""
        c = 2.0 / (a.conjugate() + b.conjugate())
        return cls(c, abs(c - a))

    def reflect(self, z: complex) -> complex:
        return self.center + self.radius ** 2 / (z - self.center).conjugate()

    def contains(self, z: complex) -> bool:
        """z in the closed disk bounded by the circle."""
        return abs(z - self.center) <= self.radius * (1 + _REGION_SLACK)

    def derivative(self, z: complex) -> float:
        """|d rho| at z: radius^2 / |z - center|^2."""
        return self.radius ** 2 / abs(z - self.center) ** 2


# C_1 joins 1 and omega, C_2 joins omega and omega^2, C_3 joins omega^2 and 1
NIELSEN_GEODESICS = tuple(
    GeodesicReflection.through(OMEGA ** j, OMEGA ** (j + 1)) for j in range(3)
)


def _region(z: complex) -> GeodesicReflection:
    if abs(z) > 1 + _REGION_SLACK:
        raise InvalidInput(f"z={z:.6g} lies outside the closed unit disk")
    for g in NIELSEN_GEODESICS:
        if g.contains(z):
            return g
    raise InsideFundamentalDomain(f"z={z:.6g} lies inside the ideal triangle")


def nielsen(z: complex) -> complex:
    return _region(complex(z)).reflect(complex(z))


def anti_farey(z: complex) -> complex:
    """Nielsen map pushed through z -> z^3 (principal cube root)."""
    z = complex(z)
    w = z ** (1.0 / 3.0) if z != 0 else 0j
    return nielsen(w) ** 3


def nielsen_circle_derivative(theta: float) -> float:
    z = cmath.exp(1j * theta)
    return _region(z).derivative(z)


def circle_winding(fn: Callable[[complex], complex], samples: int = 1024) -> int:
    """Winding number of theta -> fn(e^{i theta}) around 0."""
    theta = 2 * np.pi * (np.arange(samples) + 0.5) / samples
    values = np.array([fn(complex(np.exp(1j * t))) for t in theta])
    phase = np.unwrap(np.angle(np.append(values, values[0])))
    return int(round((phase[-1] - phase[0]) / (2 * np.pi)))


# =========================
# Rasters
# =========================

@dataclass(frozen=True, eq=False)
class GroupRaster:
    """Cells: 0 fundamental domain, k >= 1 tiling rank, or basin 1..4."""

    name: str
    kind: str
    bounds: Bounds
    nx: int
    ny: int
    max_iter: int
    cells: np.ndarray

    def metadata(self) -> dict:
        c = self.cells
        counts = {
            "outside": int(np.sum(c == BAND)),
            "unresolved": int(np.sum(c == NONESCAPING)),
        }
        if self.kind == "tiling":
            counts["fundamental"] = int(np.sum(c == 0))
            counts["tiles"] = int(np.sum(c >= 1))
        else:
            for b in range(1, 5):
                counts[f"basin_{b}"] = int(np.sum(c == b))
        return {
            "name": self.name,
            "kind": self.kind,
            "bounds": self.bounds.to_json(),
            "resolution": [self.nx, self.ny],
            "max_iter": self.max_iter,
            "counts": counts,
        }

    def rgb(self) -> np.ndarray:
        if self.kind == "tiling":
            cells = np.where(self.cells == 0, DROPLET, self.cells)
            return raster_rgb(cells)
        rgb = raster_rgb(np.where(self.cells >= 1, NONESCAPING, self.cells))
        for b, color in enumerate(BASIN_COLORS, start=1):
            rgb[self.cells == b] = color
        return rgb


BASIN_COLORS = ((200, 80, 60), (60, 120, 200), (70, 170, 110), (220, 180, 60))


def _tiling_ranks(z: np.ndarray, max_iter: int, cube: bool) -> np.ndarray:
    """Reflections until the point leaves every closed geodesic disk."""
    z = z.copy()
    cells = np.full(z.shape, NONESCAPING, dtype=np.int32)
    cells[np.abs(z) > 1.0] = BAND
    active = np.abs(z) <= 1.0
    centers = np.array([g.center for g in NIELSEN_GEODESICS])
    radii = np.array([g.radius for g in NIELSEN_GEODESICS])
    for k in range(max_iter + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        if cube:
            with np.errstate(all="ignore"):
                w = np.where(z[idx] == 0, 0, z[idx] ** (1.0 / 3.0))
        else:
            w = z[idx]
        inside = np.abs(w[:, None] - centers[None, :]) <= radii[None, :] * (1 + _REGION_SLACK)
        free = ~inside.any(axis=1)
        cells[idx[free]] = k
        active[idx[free]] = False
        if k == max_iter:
            break
        j = np.argmax(inside, axis=1)
        move = ~free
        c, r = centers[j[move]], radii[j[move]]
        img = c + r ** 2 / np.conj(w[move] - c)
        z[idx[move]] = img ** 3 if cube else img
    return cells


def group_raster(
    name: str,
    bounds: Bounds,
    resolution: int = RENDER_RES,
    max_iter: int = RENDER_MAX_ITER,
) -> GroupRaster:
    nx = ny = int(resolution)
    dx, dy = bounds.width / nx, bounds.height / ny
    x = bounds.xmin + (np.arange(nx) + 0.5) * dx
    y = bounds.ymax - (np.arange(ny) + 0.5) * dy
    z = (x[None, :] + 1j * y[:, None]).ravel()

    key = name.replace("_", "-").lower()
    if key == "nielsen":
        cells, kind = _tiling_ranks(z, max_iter, cube=False), "tiling"
    elif key in ("anti-farey", "antifarey"):
        cells, kind = _tiling_ranks(z, max_iter, cube=True), "tiling"
    elif key == "apollonian":
        cells, kind = apollonian_basins(z, max_iter), "basins"
    else:
        raise InvalidInput(f"unknown group map {name!r}")
    log(f"[Groups] rendered {key} at {nx}x{ny}")
    return GroupRaster(key, kind, bounds, nx, ny, max_iter, cells.reshape(ny, nx))


def ideal_triangle_boundary(samples: int) -> np.ndarray:
    """Points on the three geodesic sides of the ideal triangle, vertices excluded."""
    per_side = max(1, samples // 3)
    out = []
    for j, g in enumerate(NIELSEN_GEODESICS):
        a = np.angle(OMEGA ** j - g.center)
        b = np.angle(OMEGA ** (j + 1) - g.center)
        span = (b - a + np.pi) % (2 * np.pi) - np.pi
        t = (np.arange(per_side) + 0.5) / per_side
        out.append(g.center + g.radius * np.exp(1j * (a + span * t)))
    return np.concatenate(out)
