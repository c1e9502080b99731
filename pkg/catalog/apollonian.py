"""apollonian.py

The critically fixed anti-rational map R(z) = 3 conj(z)^2 / (2 conj(z)^3 + 1).

Features:
- apollonian_R(), apollonian_r_prime()
- apollonian_fixed_points(): real 2D Newton from a seed grid, closed under
  the rotation and conjugation symmetries, classified by |r'|
- apollonian_basins(): vectorized basin labels of the four superattracting
  fixed points
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from core.rational import INF, Point, is_inf
from utils.logging import log

__all__ = [
    "CRITICAL_FIXED_POINTS",
    "FixedPoint",
    "apollonian_R",
    "apollonian_r_prime",
    "apollonian_fixed_points",
    "apollonian_basins",
]

_OMEGA = cmath.exp(2j * math.pi / 3)
CRITICAL_FIXED_POINTS = (0j, 1 + 0j, _OMEGA, _OMEGA.conjugate())

_SEED_GRID = 40
_SEED_BOX = 2.0
_DEDUP = 1e-8
_POLE_TOL = 1e-12


def _r(z):
    return 3 * z ** 2 / (2 * z ** 3 + 1)


def apollonian_r_prime(z: complex) -> complex:
    """r'(z) = 6z(1 - z^3) / (2z^3 + 1)^2 for the holomorphic part r."""
    return 6 * z * (1 - z ** 3) / (2 * z ** 3 + 1) ** 2


def apollonian_R(z: Point) -> Point:
    """R on the sphere: R(inf) = 0 and the three poles map to INF."""
    if is_inf(z):
        return 0j
    w = complex(z).conjugate()
    w3 = w ** 3
    den = 2 * w3 + 1
    if abs(den) <= _POLE_TOL * max(1.0, abs(2 * w3)):
        return INF
    return 3 * w ** 2 / den


@dataclass(frozen=True)
class FixedPoint:
    z: complex
    multiplier: float
    classification: str

    def to_json(self) -> dict:
        return {"z": self.z, "multiplier": self.multiplier, "classification": self.classification}


def _classify(m: float) -> str:
    if m < 1e-8:
        return "superattracting"
    if m > 1.0:
        return "repelling"
    return "attracting" if m < 1.0 else "indifferent"


def _newton(z: complex, steps: int = 60) -> complex | None:
    """Solve conj-fixed-point G(z) = r(conj z) - z = 0.

    The real Jacobian acts as dz -> a conj(dz) - dz with a = r'(conj z),
    whose inverse gives the step below.
    """
    for _ in range(steps):
        wb = z.conjugate()
        den = 2 * wb ** 3 + 1
        if abs(den) < 1e-14:
            return None
        G = 3 * wb ** 2 / den - z
        a = apollonian_r_prime(wb)
        det = abs(a) ** 2 - 1.0
        if abs(det) < 1e-14:
            return None
        step = -(G + a * G.conjugate()) / det
        z = z + step
        if not (math.isfinite(z.real) and math.isfinite(z.imag)) or abs(z) > 1e6:
            return None
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    return z


def apollonian_fixed_points() -> list[FixedPoint]:
    """All ten fixed points, sorted by (re, im)."""
    found: list[complex] = []

    def add(z: complex) -> None:
        r = apollonian_R(z)
        if is_inf(r) or abs(r - z) > 1e-10:
            return
        if all(abs(z - u) > _DEDUP for u in found):
            found.append(z)

    axis = np.linspace(-_SEED_BOX, _SEED_BOX, _SEED_GRID)
    for x in axis:
        for y in axis:
            z = _newton(complex(x, y))
            if z is not None:
                add(z)

    for z in list(found):
        for k in range(3):
            rz = _newton(z * _OMEGA ** k)
            if rz is not None:
                add(rz)
                cz = _newton(rz.conjugate())
                if cz is not None:
                    add(cz)

    out = []
    for z in sorted(found, key=lambda u: (round(u.real, 9), round(u.imag, 9))):
        m = abs(apollonian_r_prime(z.conjugate()))
        out.append(FixedPoint(z, m, _classify(m)))
    log(f"[Apollonian] {len(out)} fixed points")
    return out


def apollonian_basins(z: np.ndarray, max_iter: int, tol: float = 1e-9) -> np.ndarray:
    """1..4 for the basin of 0, 1, omega, omega^2; -3 when undecided."""
    z = np.asarray(z, dtype=complex).copy()
    targets = np.array(CRITICAL_FIXED_POINTS)
    cells = np.full(z.shape, -3, dtype=np.int32)
    active = np.ones(z.shape, dtype=bool)
    for _ in range(max_iter + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        zi = z[idx]
        dist = np.abs(zi[:, None] - targets[None, :])
        hit = dist.min(axis=1) < tol
        cells[idx[hit]] = np.argmin(dist[hit], axis=1) + 1
        active[idx[hit]] = False
        stay = idx[~hit]
        with np.errstate(all="ignore"):
            nxt = _r(np.conj(z[stay]))
        # R(inf) = 0
        nxt[~np.isfinite(nxt)] = 0
        z[stay] = nxt
    return cells
