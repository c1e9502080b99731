"""boundary.py

Sampled boundary curves theta -> f(e^{i theta}) and their self-contacts.

Features:
- uniform circle sampling of a rational map
- proper segment crossings of the closed polyline (KD-tree candidates)
- near contacts between samples more than `guard` steps apart
- signed minimum gap: negative as soon as the polyline crosses itself
- pixel rasterization of the curve (boundary band of escape rasters)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from core.rational import RationalMap

__all__ = [
    "BoundaryContact",
    "circle_points",
    "sample_boundary",
    "tangent_directions",
    "segment_crossings",
    "near_contacts",
    "signed_gap",
    "cyclic_separation",
    "rasterize_curve",
]


@dataclass(frozen=True)
class BoundaryContact:
    """Two boundary samples (indices into the sample array) that come close."""

    i: int
    j: int
    distance: float


def circle_points(n: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(n) / n
    return np.exp(1j * theta)


def sample_boundary(f: RationalMap, n: int) -> np.ndarray:
    """f(e^{2 pi i k / n}) for k = 0..n-1."""
    return f.eval_array(circle_points(n))


def tangent_directions(f: RationalMap, w: np.ndarray) -> np.ndarray:
    """d/dtheta f(e^{i theta}) at circle points w = e^{i theta}."""
    w = np.asarray(w, dtype=complex)
    return 1j * w * f.derivative().eval_array(w)


def cyclic_separation(i: np.ndarray, j: np.ndarray, n: int) -> np.ndarray:
    d = np.abs(np.asarray(i) - np.asarray(j))
    return np.minimum(d, n - d)


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a.real * b.imag - a.imag * b.real


def segment_crossings(z: np.ndarray, min_sep: int = 2) -> np.ndarray:
    """Index pairs (i, j) whose segments z[i]z[i+1], z[j]z[j+1] cross properly.

    The polyline is closed. Segments closer than `min_sep` along the curve
    are never compared.
    """
    n = len(z)
    if n < 4:
        return np.empty((0, 2), dtype=int)
    nxt = np.roll(z, -1)
    mids = (z + nxt) / 2
    lmax = float(np.max(np.abs(nxt - z)))
    tree = cKDTree(np.column_stack([mids.real, mids.imag]))
    pairs = tree.query_pairs(r=lmax * (1 + 1e-9), output_type="ndarray")
    if len(pairs) == 0:
        return np.empty((0, 2), dtype=int)
    i, j = pairs[:, 0], pairs[:, 1]
    keep = cyclic_separation(i, j, n) >= min_sep
    i, j = i[keep], j[keep]

    p1, p2, q1, q2 = z[i], nxt[i], z[j], nxt[j]
    d1 = _cross(p2 - p1, q1 - p1)
    d2 = _cross(p2 - p1, q2 - p1)
    d3 = _cross(q2 - q1, p1 - q1)
    d4 = _cross(q2 - q1, p2 - q1)
    proper = (d1 * d2 < 0) & (d3 * d4 < 0)
    return np.column_stack([i[proper], j[proper]])


def near_contacts(z: np.ndarray, radius: float, guard: int) -> list[BoundaryContact]:
    """Sample pairs within `radius` and more than `guard` steps apart."""
    n = len(z)
    tree = cKDTree(np.column_stack([z.real, z.imag]))
    pairs = tree.query_pairs(r=radius, output_type="ndarray")
    if len(pairs) == 0:
        return []
    i, j = pairs[:, 0], pairs[:, 1]
    keep = cyclic_separation(i, j, n) > guard
    i, j = i[keep], j[keep]
    dist = np.abs(z[i] - z[j])
    order = np.lexsort((j, i, dist))
    return [BoundaryContact(int(i[k]), int(j[k]), float(dist[k])) for k in order]


def signed_gap(z: np.ndarray, guard: int) -> float:
    """Minimum distance between samples more than `guard` steps apart.

    Negative when the closed polyline crosses itself; its magnitude is then
    the largest endpoint distance among crossing segment pairs.
    """
    crossings = segment_crossings(z)
    if len(crossings):
        nxt = np.roll(z, -1)
        i, j = crossings[:, 0], crossings[:, 1]
        ends = np.stack([
            np.abs(z[i] - z[j]), np.abs(z[i] - nxt[j]),
            np.abs(nxt[i] - z[j]), np.abs(nxt[i] - nxt[j]),
        ])
        depth = float(np.max(np.min(ends, axis=0)))
        return -max(depth, np.finfo(float).tiny)

    n = len(z)
    k = min(n, 2 * guard + 8)
    pts = np.column_stack([z.real, z.imag])
    dist, idx = cKDTree(pts).query(pts, k=k)
    far = cyclic_separation(np.arange(n)[:, None], idx, n) > guard
    if far.any():
        return float(dist[far].min())
    # No distant sample among the k nearest: every distant pair is farther
    return float(dist[:, -1].min())


def rasterize_curve(
    z: np.ndarray, xmin: float, ymax: float, dx: float, dy: float, nx: int, ny: int
) -> np.ndarray:
    """Boolean (ny, nx) mask of the pixels a densely sampled curve visits.

    Row 0 is the top of the view (largest imaginary part).
    """
    mask = np.zeros((ny, nx), dtype=bool)
    z = z[np.isfinite(z)]
    col = np.floor((z.real - xmin) / dx).astype(np.int64)
    row = np.floor((ymax - z.imag) / dy).astype(np.int64)
    ok = (col >= 0) & (col < nx) & (row >= 0) & (row < ny)
    mask[row[ok], col[ok]] = True
    return mask
