"""dynamics.py

Iteration of the Schwarz reflection and escape rasters.

Features:
- classify(): one orbit until it escapes into the droplet, converges to a
  boundary singularity or a cycle, leaves the numeric range, or exhausts
  its budget
- classify_points(): the same escape test vectorized over many points
- render(): EscapeRaster over a view rectangle, boundary band drawn from a
  dense boundary sampling, optional supersampled image
- count_escape_components(), tile_separation(): raster topology
- critical_orbits(): one orbit per sigma-critical point
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
from scipy import ndimage

from config import (
    ANALYSIS_MAX_ITER,
    CHART_GUARD,
    CYCLE_TOL,
    MIN_COMPONENT_PIXELS,
    RASTER_CHUNK,
    RENDER_MAX_ITER,
    RENDER_RES,
    SINGULAR_RADIUS,
)
from core.boundary import rasterize_curve, sample_boundary
from core.quadrature import QuadratureDomain, RegionTag, crit_sigma, kappa, membership
from core.rational import INF, Point, batch_roots, is_inf
from core.singularity import Singularity
from utils.helpers import Bounds
from utils.jsonio import point_to_json
from utils.logging import log, log_warn

__all__ = [
    "DROPLET",
    "BAND",
    "NONESCAPING",
    "FAILED",
    "OutcomeKind",
    "Outcome",
    "OrbitRecord",
    "EscapeRaster",
    "ComponentCounts",
    "infinity_attracting",
    "classify",
    "classify_points",
    "boundary_band",
    "render",
    "raster_rgb",
    "image_of",
    "count_escape_components",
    "tile_separation",
    "critical_orbits",
]

# Raster cell codes; k >= 1 is an escaping rank
DROPLET = -1
BAND = -2
NONESCAPING = -3
FAILED = -4

PALETTE = {
    "droplet": (235, 220, 170),
    "odd": (60, 120, 200),
    "even": (70, 170, 110),
    "nonescaping": (128, 128, 128),
    "band": (20, 20, 20),
    "failed": (255, 0, 255),
}


# =========================
# Orbits
# =========================

class OutcomeKind(str, Enum):
    ESCAPED = "EscapedAtRank"
    NON_ESCAPING = "NonEscaping"
    CONVERGED_TO_SINGULAR = "ConvergedToSingular"
    CONVERGED_TO_CYCLE = "ConvergedToCycle"
    LEFT_RANGE = "LeftNumericRange"


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeKind
    rank: int | None = None
    budget: int | None = None
    singularity: Singularity | None = None
    period: int | None = None
    representative: Point | None = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if self.rank is not None:
            out["rank"] = self.rank
        if self.budget is not None:
            out["budget"] = self.budget
        if self.singularity is not None:
            out["singularity"] = point_to_json(self.singularity.location)
        if self.period is not None:
            out["period"] = self.period
            out["representative"] = point_to_json(self.representative)
        return out


@dataclass(frozen=True)
class OrbitRecord:
    start: Point
    points: tuple[Point, ...]
    outcome: Outcome
    multiplicity: int = 1

    @property
    def escaped(self) -> bool:
        return self.outcome.kind is OutcomeKind.ESCAPED

    @property
    def rank(self) -> int | None:
        return self.outcome.rank

    def to_json(self) -> dict:
        return {
            "start": point_to_json(self.start),
            "multiplicity": self.multiplicity,
            "steps": len(self.points) - 1,
            "outcome": self.outcome.to_json(),
        }


def infinity_attracting(Q: QuadratureDomain) -> bool:
    """True when inf is a fixed point of sigma that attracts nearby orbits.

    Near inf, |sigma(z)| ~ |a/lam| |z| for a simple pole of f at 0 with
    residue a (lam the leading coefficient at inf); a double or higher pole
    makes inf superattracting.
    """
    num, den = Q.f.num, Q.f.den
    k = den.low_order_zeros
    if k >= 2:
        return True
    if k == 0:
        return False
    residue = num.coeffs[0] / den.coeffs[1]
    lam = num.leading / den.leading
    return abs(residue / lam) > 1.0


def _distance(a: Point, b: Point) -> float:
    if is_inf(a) or is_inf(b):
        return 0.0 if a is b else math.inf
    return abs(complex(a) - complex(b))


def _minimal_period(points: Sequence[Point], lam: int, tol: float) -> int:
    for p in range(1, lam):
        if lam % p == 0 and _distance(points[-1], points[-1 - p]) < tol:
            return p
    return lam


def _sigma_from(Q: QuadratureDomain, witness: Point) -> Point:
    return Q.f(kappa(witness))


def classify(
    Q: QuadratureDomain,
    z: Point,
    max_iter: int = ANALYSIS_MAX_ITER,
    tol: float = CYCLE_TOL,
    singularities: Sequence[Singularity] = (),
) -> OrbitRecord:
    """Follow z -> sigma(z) until the orbit's fate is decided."""
    start = z
    points: list[Point] = [z]
    attracting = None

    # Brent cycle detection state
    power, lam = 1, 0
    tortoise: Point = z

    for k in range(max_iter + 1):
        cur = points[-1]
        if is_inf(cur):
            nxt = Q.sigma_at_inf()
            if is_inf(nxt):
                return OrbitRecord(start, tuple(points), Outcome(OutcomeKind.CONVERGED_TO_CYCLE, period=1, representative=INF))
        else:
            if abs(cur) > CHART_GUARD:
                if attracting is None:
                    attracting = infinity_attracting(Q)
                if attracting:
                    return OrbitRecord(start, tuple(points), Outcome(OutcomeKind.CONVERGED_TO_CYCLE, period=1, representative=INF))
                log_warn(f"[Dynamics] orbit of {point_to_json(start)} left the numeric range at step {k}")
                return OrbitRecord(start, tuple(points), Outcome(OutcomeKind.LEFT_RANGE))
            m = membership(Q, cur)
            if m.tag is not RegionTag.OMEGA:
                return OrbitRecord(start, tuple(points), Outcome(OutcomeKind.ESCAPED, rank=k))
            nxt = _sigma_from(Q, m.witness)

        if k == max_iter:
            break
        points.append(nxt)

        if not is_inf(nxt):
            for s in singularities:
                d0 = abs(complex(nxt) - s.location)
                if d0 < SINGULAR_RADIUS and len(points) >= 5:
                    d2, d4 = (_distance(points[-3], s.location), _distance(points[-5], s.location))
                    if d0 < d2 < d4:
                        return OrbitRecord(start, tuple(points), Outcome(OutcomeKind.CONVERGED_TO_SINGULAR, singularity=s))

        lam += 1
        if _distance(nxt, tortoise) < tol:
            period = _minimal_period(points, lam, tol)
            return OrbitRecord(
                start, tuple(points),
                Outcome(OutcomeKind.CONVERGED_TO_CYCLE, period=period, representative=nxt),
            )
        if lam == power:
            tortoise, power, lam = nxt, power * 2, 0

    return OrbitRecord(start, tuple(points), Outcome(OutcomeKind.NON_ESCAPING, budget=max_iter))


def critical_orbits(
    Q: QuadratureDomain,
    max_iter: int = ANALYSIS_MAX_ITER,
    singularities: Sequence[Singularity] = (),
) -> list[OrbitRecord]:
    """One orbit per sigma-critical point, carrying its multiplicity."""
    records = []
    for r in crit_sigma(Q):
        rec = classify(Q, r.location, max_iter, singularities=singularities)
        records.append(OrbitRecord(rec.start, rec.points, rec.outcome, r.multiplicity))
    return records


# =========================
# Vectorized escape test
# =========================

def _padded(Q: QuadratureDomain) -> tuple[np.ndarray, np.ndarray]:
    d = Q.f.degree
    num = np.zeros(d + 1, dtype=complex)
    den = np.zeros(d + 1, dtype=complex)
    num[: len(Q.f.num.coeffs)] = Q.f.num.array
    den[: len(Q.f.den.coeffs)] = Q.f.den.array
    return num, den


def _classify_chunk(Q, z, max_iter, band, num, den, f0, attracting) -> np.ndarray:
    z = z.astype(complex).copy()
    codes = np.full(z.shape, NONESCAPING, dtype=np.int32)
    active = np.ones(z.shape, dtype=bool)

    for k in range(max_iter + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        zk = z[idx]

        at_inf = ~np.isfinite(zk)
        if at_inf.any():
            hit = idx[at_inf]
            if f0 is None:
                active[hit] = False
            elif k == max_iter:
                active[hit] = False
            else:
                z[hit] = f0
            idx, zk = idx[~at_inf], zk[~at_inf]

        far = np.abs(zk) > CHART_GUARD
        if far.any():
            hit = idx[far]
            codes[hit] = NONESCAPING if attracting else FAILED
            active[hit] = False
            idx, zk = idx[~far], zk[~far]
        if idx.size == 0:
            continue

        rows = num[None, :] - zk[:, None] * den[None, :]
        with np.errstate(all="ignore"):
            fib = batch_roots(rows)
        mod = np.abs(fib)
        bad = ~np.all(np.isfinite(fib), axis=1)
        if bad.any():
            codes[idx[bad]] = FAILED
            active[idx[bad]] = False
        good = ~bad
        idx, fib, mod = idx[good], fib[good], mod[good]

        jmax = np.argmax(mod, axis=1)
        mmax = mod[np.arange(len(idx)), jmax]
        escaped = mmax <= 1.0 + band
        codes[idx[escaped]] = k if k > 0 else DROPLET
        active[idx[escaped]] = False

        stay = idx[~escaped]
        if k == max_iter:
            active[stay] = False
            continue
        w = fib[~escaped, jmax[~escaped]] if stay.size else np.empty(0, dtype=complex)
        with np.errstate(all="ignore"):
            z[stay] = Q.f.eval_array(1.0 / np.conj(w))
    return codes


def classify_points(
    Q: QuadratureDomain,
    z: np.ndarray,
    max_iter: int = RENDER_MAX_ITER,
    band: float | None = None,
) -> np.ndarray:
    """Cell codes for finite points: DROPLET, NONESCAPING, FAILED or rank k."""
    band = Q.band_tol if band is None else band
    z = np.asarray(z, dtype=complex).ravel()
    num, den = _padded(Q)
    f0 = Q.sigma_at_inf()
    f0 = None if is_inf(f0) else complex(f0)
    attracting = infinity_attracting(Q)
    out = np.empty(z.shape, dtype=np.int32)
    for lo in range(0, z.size, RASTER_CHUNK):
        hi = min(lo + RASTER_CHUNK, z.size)
        out[lo:hi] = _classify_chunk(Q, z[lo:hi], max_iter, band, num, den, f0, attracting)
    return out


# =========================
# Rasters
# =========================

@dataclass(frozen=True, eq=False)
class EscapeRaster:
    """Per-pixel cell codes, row 0 at the top of the view."""

    bounds: Bounds
    nx: int
    ny: int
    max_iter: int
    cells: np.ndarray
    supersample: int = 1
    image: np.ndarray | None = field(default=None, repr=False)
    name: str = ""

    @property
    def dx(self) -> float:
        return self.bounds.width / self.nx

    @property
    def dy(self) -> float:
        return self.bounds.height / self.ny

    def counts(self) -> dict[str, int]:
        c = self.cells
        return {
            "droplet": int(np.sum(c == DROPLET)),
            "band": int(np.sum(c == BAND)),
            "nonescaping": int(np.sum(c == NONESCAPING)),
            "escaping": int(np.sum(c >= 1)),
            "failed": int(np.sum(c == FAILED)),
        }

    def metadata(self) -> dict:
        counts = self.counts()
        ranks = np.unique(self.cells[self.cells >= 1])
        return {
            "name": self.name,
            "bounds": self.bounds.to_json(),
            "resolution": [self.nx, self.ny],
            "max_iter": self.max_iter,
            "supersample": self.supersample,
            "counts": counts,
            "failures": counts["failed"],
            "max_rank": int(ranks.max()) if ranks.size else 0,
            "palette": {k: list(v) for k, v in PALETTE.items()},
        }


def _pixel_centers(bounds: Bounds, nx: int, ny: int, sub: int = 1) -> np.ndarray:
    dx, dy = bounds.width / (nx * sub), bounds.height / (ny * sub)
    x = bounds.xmin + (np.arange(nx * sub) + 0.5) * dx
    y = bounds.ymax - (np.arange(ny * sub) + 0.5) * dy
    return x[None, :] + 1j * y[:, None]


def boundary_band(Q: QuadratureDomain, bounds: Bounds, nx: int, ny: int) -> np.ndarray:
    """Pixels visited by a boundary sampling finer than the pixel size."""
    dx, dy = bounds.width / nx, bounds.height / ny
    coarse = sample_boundary(Q.f, 4096)
    perimeter = float(np.sum(np.abs(np.roll(coarse, -1) - coarse)))
    n = int(min(max(4096, 4 * perimeter / min(dx, dy)), 1 << 22))
    z = sample_boundary(Q.f, n)
    return rasterize_curve(z, bounds.xmin, bounds.ymax, dx, dy, nx, ny)


def raster_rgb(cells: np.ndarray) -> np.ndarray:
    """Fixed palette: droplet sand, escaping by rank parity, gray non-escaping."""
    rgb = np.empty(cells.shape + (3,), dtype=np.uint8)
    rgb[cells == DROPLET] = PALETTE["droplet"]
    rgb[cells == BAND] = PALETTE["band"]
    rgb[cells == NONESCAPING] = PALETTE["nonescaping"]
    rgb[cells == FAILED] = PALETTE["failed"]
    rgb[(cells >= 1) & (cells % 2 == 1)] = PALETTE["odd"]
    rgb[(cells >= 1) & (cells % 2 == 0)] = PALETTE["even"]
    return rgb


def render(
    Q: QuadratureDomain,
    bounds: Bounds,
    resolution: int | tuple[int, int] = RENDER_RES,
    max_iter: int = RENDER_MAX_ITER,
    supersample: int = 1,
) -> EscapeRaster:
    nx, ny = (resolution, resolution) if isinstance(resolution, int) else resolution
    if nx < 1 or ny < 1 or supersample < 1:
        raise ValueError(f"resolution and supersample must be positive, got {resolution}, {supersample}")

    centers = _pixel_centers(bounds, nx, ny)
    cells = classify_points(Q, centers, max_iter).reshape(ny, nx)
    cells[boundary_band(Q, bounds, nx, ny)] = BAND

    image = None
    if supersample > 1:
        s = supersample
        sub = classify_points(Q, _pixel_centers(bounds, nx, ny, s), max_iter).reshape(ny * s, nx * s)
        sub[boundary_band(Q, bounds, nx * s, ny * s)] = BAND
        rgb = raster_rgb(sub).astype(np.float64).reshape(ny, s, nx, s, 3)
        image = np.rint(rgb.mean(axis=(1, 3))).astype(np.uint8)

    raster = EscapeRaster(bounds, nx, ny, max_iter, cells, supersample, image, Q.name)
    counts = raster.counts()
    if counts["failed"]:
        log_warn(f"[Dynamics] {Q.name or 'map'}: {counts['failed']} pixels failed numerically")
    log(f"[Dynamics] rendered {Q.name or 'map'} at {nx}x{ny}, max_iter={max_iter}")
    return raster


def image_of(raster: EscapeRaster) -> np.ndarray:
    return raster.image if raster.image is not None else raster_rgb(raster.cells)


# =========================
# Raster topology
# =========================

_EIGHT = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class ComponentCounts:
    droplet_interior: int
    closed_droplet: int
    non_escaping: int

    def to_json(self) -> dict:
        return {
            "droplet_interior": self.droplet_interior,
            "closed_droplet": self.closed_droplet,
            "non_escaping": self.non_escaping,
        }


def _count(mask: np.ndarray) -> int:
    labels, n = ndimage.label(mask, structure=_EIGHT)
    if n == 0:
        return 0
    sizes = np.bincount(labels.ravel())[1:]
    return int(np.sum(sizes >= MIN_COMPONENT_PIXELS))


def count_escape_components(raster: EscapeRaster) -> ComponentCounts:
    """8-connected components of the droplet interior, the closed droplet
    (interior plus boundary band) and the non-escaping cells."""
    c = raster.cells
    return ComponentCounts(
        droplet_interior=_count(c == DROPLET),
        closed_droplet=_count((c == DROPLET) | (c == BAND)),
        non_escaping=_count(c == NONESCAPING),
    )


def tile_separation(raster: EscapeRaster) -> float:
    """Plane distance from sigma^{-1}(Omega) cells to the closed droplet.

    sigma^{-1}(Omega) is everything of rank >= 2 plus the non-escaping set.
    One pixel is subtracted for the discretization; inf when no such cell.
    """
    c = raster.cells
    closed = (c == DROPLET) | (c == BAND)
    inner = (c == NONESCAPING) | (c >= 2)
    if not inner.any() or not closed.any():
        return math.inf
    dist = ndimage.distance_transform_edt(~closed, sampling=(raster.dy, raster.dx))
    return float(dist[inner].min()) - max(raster.dx, raster.dy)
