"""singularity.py

Boundary singularities of a quadrature domain.

Features:
- find_cusps(): circle zeros of f' (simple only) and their images
- find_double_points(): near contacts of the sampled boundary, refined by
  Levenberg-Marquardt on f(e^{is}) = f(e^{it}), accepted only when the two
  arcs meet tangentially
- fit_order(): exponent fit of |sigma^2(z) - z| against |z - p| along
  rays into the domain, rounded to an odd order
- delta_weight(): floor(n/4) for cusps, floor(n/2) for double points
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import least_squares

from config import (
    CUSP_EXCLUSION_ANGLE,
    DOUBLE_POINT_GRID,
    DOUBLE_POINT_TOL,
    FIT_RADII,
    FIT_RESIDUAL_MAX,
    FIT_ROUNDING_MAX,
    MAX_CONTACT_SEEDS,
    SEPARATION_GUARD_STEPS,
    TANGENCY_ANGLE_TOL,
)
from core.boundary import cyclic_separation, near_contacts, sample_boundary
from core.errors import (
    AmbiguousBand,
    FitUnstable,
    HigherOrderCircleCritical,
    InvalidInput,
    NewtonDivergence,
    OutsideDomain,
    UnivalenceViolation,
)
from core.quadrature import QuadratureDomain, schwarz_reflect
from core.rational import is_inf
from utils.jsonio import point_to_json
from utils.logging import log, log_warn

__all__ = [
    "SingularityKind",
    "FitDiagnostics",
    "Singularity",
    "delta_weight",
    "order_from_slope",
    "find_cusps",
    "find_double_points",
    "fit_order",
    "fit_germ_order",
    "classify_singularities",
]


class SingularityKind(str, Enum):
    CUSP = "cusp"
    DOUBLE_POINT = "double_point"


@dataclass(frozen=True)
class FitDiagnostics:
    slope: float
    residual: float
    stable: bool = True


@dataclass(frozen=True)
class Singularity:
    """A cusp (one circle preimage) or double point (two circle preimages).

    `order_n` is None until fitted; `delta` is 0 then.
    """

    kind: SingularityKind
    location: complex
    preimages: tuple[complex, ...]
    order_n: int | None = None
    delta: int = 0
    fit: FitDiagnostics | None = None

    def with_order(self, n: int | None, fit: FitDiagnostics) -> "Singularity":
        delta = delta_weight(self.kind, n) if n is not None else 0
        return replace(self, order_n=n, delta=delta, fit=fit)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "z": point_to_json(self.location),
            "preimages": [point_to_json(w) for w in self.preimages],
            "n": self.order_n,
            "delta": self.delta,
            "slope": self.fit.slope if self.fit else None,
            "residual": self.fit.residual if self.fit else None,
            "fit_stable": self.fit.stable if self.fit else None,
        }


# =========================
# Weights and orders
# =========================

def _min_order(kind: SingularityKind) -> int:
    return 3 if kind is SingularityKind.CUSP else 1


def delta_weight(kind: SingularityKind, n: int) -> int:
    kind = SingularityKind(kind)
    if not isinstance(n, (int, np.integer)) or n % 2 == 0 or n < _min_order(kind):
        raise InvalidInput(f"{kind.value} order must be an odd integer >= {_min_order(kind)}, got {n!r}")
    return int(n) // 4 if kind is SingularityKind.CUSP else int(n) // 2


def _nearest_odd(x: float, floor: int) -> int:
    n = 2 * math.floor((x - 1.0) / 2.0 + 0.5) + 1
    return max(int(n), floor)


def order_from_slope(kind: SingularityKind, slope: float, residual: float) -> int:
    """Odd order n from a fitted exponent; FitUnstable when not clean.

    Cusps: sigma^2(z) - z ~ (z-p)^{n/2}. Double points: ~ (z-p)^{n+1}.
    """
    kind = SingularityKind(kind)
    if not math.isfinite(slope) or residual > FIT_RESIDUAL_MAX:
        raise FitUnstable(f"{kind.value}: fit residual {residual:.3g}", slope, residual)
    if kind is SingularityKind.CUSP:
        n = _nearest_odd(2.0 * slope, 3)
        miss = abs(slope - n / 2.0)
    else:
        n = _nearest_odd(slope - 1.0, 1)
        miss = abs(slope - (n + 1))
    if miss > FIT_ROUNDING_MAX:
        raise FitUnstable(
            f"{kind.value}: slope {slope:.4f} is {miss:.3f} from the nearest odd order {n}",
            slope,
            residual,
        )
    return n


def _fit_slope(radii: Sequence[float], displacement: Sequence[float]) -> tuple[float, float]:
    r = np.asarray(radii, dtype=float)
    d = np.asarray(displacement, dtype=float)
    ok = np.isfinite(d) & (d > 0)
    if ok.sum() < 3:
        return float("nan"), float("inf")
    x, y = np.log(r[ok]), np.log(d[ok])
    coef = np.polyfit(x, y, 1)
    resid = y - np.polyval(coef, x)
    return float(coef[0]), float(np.sqrt(np.mean(resid ** 2)))


# =========================
# Cusps
# =========================

def find_cusps(Q: QuadratureDomain, tol: float | None = None) -> list[Singularity]:
    tol = Q.band_tol if tol is None else tol
    out: list[Singularity] = []
    for r in Q.crit_f.finite():
        c = r.location
        if abs(abs(c) - 1.0) >= tol:
            continue
        if r.multiplicity >= 2:
            raise HigherOrderCircleCritical(
                f"{Q.name or 'map'}: circle critical point {c:.9g} has multiplicity {r.multiplicity}"
            )
        w = c / abs(c)
        out.append(Singularity(SingularityKind.CUSP, complex(Q.f(w)), (w,)))
    return out


# =========================
# Double points
# =========================

def _circle_eval(Q: QuadratureDomain, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w = np.exp(1j * np.asarray(theta, dtype=float))
    return Q.f.eval_array(w), Q.f.derivative().eval_array(w)


def _angle_gap(a: float, b: float) -> float:
    d = abs((a - b) % (2 * math.pi))
    return min(d, 2 * math.pi - d)


def _seed_pairs(z: np.ndarray, guard: int) -> list[tuple[int, int]]:
    step = float(np.max(np.abs(np.roll(z, -1) - z)))
    n = len(z)
    seeds: list[tuple[int, int]] = []
    for contact in near_contacts(z, 4 * step, guard):
        i, j = contact.i, contact.j
        close = any(
            cyclic_separation(i, a, n) <= 2 * guard and cyclic_separation(j, b, n) <= 2 * guard
            or cyclic_separation(i, b, n) <= 2 * guard and cyclic_separation(j, a, n) <= 2 * guard
            for a, b in seeds
        )
        if not close:
            seeds.append((i, j))
            if len(seeds) >= MAX_CONTACT_SEEDS:
                break
    return seeds


def _refine_contact(Q: QuadratureDomain, s0: float, t0: float):
    f_prime = Q.f.derivative()

    def residual(x: np.ndarray) -> np.ndarray:
        w = np.exp(1j * x)
        v = Q.f.eval_array(w)
        F = v[0] - v[1]
        return np.array([F.real, F.imag])

    def jacobian(x: np.ndarray) -> np.ndarray:
        w = np.exp(1j * x)
        t = 1j * w * f_prime.eval_array(w)
        ds, dt = t[0], -t[1]
        return np.array([[ds.real, dt.real], [ds.imag, dt.imag]])

    return least_squares(residual, np.array([s0, t0]), jac=jacobian, method="lm", xtol=1e-15, ftol=1e-15)


def find_double_points(
    Q: QuadratureDomain,
    grid: int = DOUBLE_POINT_GRID,
    tol: float = DOUBLE_POINT_TOL,
    *,
    tangency_tol: float = TANGENCY_ANGLE_TOL,
) -> list[Singularity]:
    """Tangential self-contacts of the boundary.

    Raises UnivalenceViolation for a transversal crossing.
    """
    label = Q.name or "map"
    guard_angle = SEPARATION_GUARD_STEPS * 2 * math.pi / grid
    cusp_angles = [math.atan2(s.preimages[0].imag, s.preimages[0].real) for s in find_cusps(Q)]

    z = sample_boundary(Q.f, grid)
    found: list[tuple[float, float, Singularity]] = []
    for i, j in _seed_pairs(z, SEPARATION_GUARD_STEPS):
        s0, t0 = 2 * math.pi * i / grid, 2 * math.pi * j / grid
        sol = _refine_contact(Q, s0, t0)
        s, t = (float(a) % (2 * math.pi) for a in sol.x)
        res = float(np.hypot(*sol.fun))
        if res >= tol:
            if not sol.success:
                err = NewtonDivergence(f"{label}: contact refinement from samples ({i}, {j}) stalled at {res:.3g}")
                log_warn(f"[Singularity] {err}")
            continue
        if _angle_gap(s, t) <= guard_angle:
            continue
        # Both preimages hugging one cusp: the two cusp branches, not a contact
        if any(_angle_gap(s, a) < CUSP_EXCLUSION_ANGLE and _angle_gap(t, a) < CUSP_EXCLUSION_ANGLE for a in cusp_angles):
            continue
        if any(_angle_gap(s, a) <= guard_angle and _angle_gap(t, b) <= guard_angle
               or _angle_gap(s, b) <= guard_angle and _angle_gap(t, a) <= guard_angle
               for a, b, _ in found):
            continue

        v, dv = _circle_eval(Q, np.array([s, t]))
        if np.min(np.abs(dv)) <= 1e-6:
            continue
        T1, T2 = 1j * np.exp(1j * s) * dv[0], 1j * np.exp(1j * t) * dv[1]
        angle = abs((T1 * np.conj(T2)).imag) / (abs(T1) * abs(T2))
        p = complex((v[0] + v[1]) / 2)
        if angle >= tangency_tol:
            raise UnivalenceViolation(
                f"{label}: boundary crosses itself at {p:.9g} (sin angle {angle:.3g})"
            )
        a, b = sorted((s, t))
        found.append((a, b, Singularity(SingularityKind.DOUBLE_POINT, p, (np.exp(1j * a), np.exp(1j * b)))))

    if found:
        log(f"[Singularity] {label}: {len(found)} double point(s)")
    return [sing for _, _, sing in found]


# =========================
# Order fits
# =========================

def _sigma2_displacement(Q: QuadratureDomain, z: complex) -> float:
    z1 = schwarz_reflect(Q, z)
    if is_inf(z1):
        return float("nan")
    z2 = schwarz_reflect(Q, z1)
    if is_inf(z2):
        return float("nan")
    return abs(complex(z2) - z)


def _ray_directions(Q: QuadratureDomain, s: Singularity) -> list[complex]:
    if s.kind is SingularityKind.CUSP:
        w0 = s.preimages[0]
        u = complex(Q.f(w0 * (1 + 1e-4))) - complex(Q.f(w0))
        return [u / abs(u)]
    w1 = s.preimages[0]
    T = 1j * w1 * Q.f.derivative_at(w1)
    n = 1j * T / abs(T)
    return [n, -n]


def fit_order(Q: QuadratureDomain, s: Singularity, radii: Sequence[float] = FIT_RADII) -> Singularity:
    """Fit the order of `s`; returns `s` with order, delta and diagnostics.

    Raises FitUnstable.
    """
    slopes, residuals = [], []
    for u in _ray_directions(Q, s):
        disp = []
        for r in radii:
            try:
                disp.append(_sigma2_displacement(Q, s.location + r * u))
            except (OutsideDomain, AmbiguousBand) as e:
                raise FitUnstable(f"{s.kind.value} at {s.location:.6g}: fit ray left the domain ({e})") from e
        slope, resid = _fit_slope(radii, disp)
        slopes.append(slope)
        residuals.append(resid)
    slope, resid = float(np.mean(slopes)), float(max(residuals))
    n = order_from_slope(s.kind, slope, resid)
    return s.with_order(n, FitDiagnostics(slope, resid))


def fit_germ_order(
    germ: Callable[[complex], complex],
    kind: SingularityKind = SingularityKind.DOUBLE_POINT,
    p: complex = 0j,
    direction: complex = 1.0,
    radii: Sequence[float] = FIT_RADII,
) -> int:
    """Order fit for an explicit second-iterate germ at its fixed point p."""
    disp = [abs(germ(p + r * direction) - (p + r * direction)) for r in radii]
    slope, resid = _fit_slope(radii, disp)
    return order_from_slope(kind, slope, resid)


def classify_singularities(
    Q: QuadratureDomain,
    grid: int = DOUBLE_POINT_GRID,
    tol: float = DOUBLE_POINT_TOL,
    radii: Sequence[float] = FIT_RADII,
) -> list[Singularity]:
    """Cusps then double points, each with a fitted order.

    An unstable fit leaves order None and delta 0 and is logged.
    """
    out = []
    for s in find_cusps(Q) + find_double_points(Q, grid, tol):
        try:
            out.append(fit_order(Q, s, radii))
        except FitUnstable as e:
            log_warn(f"[Singularity] {Q.name or 'map'}: {e}; delta taken as 0")
            out.append(replace(s, fit=FitDiagnostics(e.slope, e.residual, stable=False)))
    return out
