"""pinch.py

Symmetric two-pole family f_c(w) = w - c/(w - q) - c/(w + q), 0 < q < 1.

The boundary passes through f_c(+-1) = +-(1 - 2c/(1 - q^2)); the two arcs
through these points touch at 0 exactly when c = (1 - q^2)/2 and cross
beyond it. Critical points satisfy |w|^4 = q^4 + 2cq^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from config import DOUBLE_POINT_GRID, PINCH_BRACKET, PINCH_Q, PINCH_TOL
from core.boundary import sample_boundary, segment_crossings
from core.errors import BadBracket, InvalidInput, UnivalenceViolation
from core.quadrature import QuadratureDomain, build_domain
from core.rational import Polynomial, RationalMap
from core.singularity import Singularity, find_double_points
from utils.logging import log

__all__ = ["PinchResult", "pinch_map", "pinch_crosses", "pinch_search"]


def pinch_map(q: float, c: float) -> RationalMap:
    if not 0.0 < q < 1.0:
        raise InvalidInput(f"pinch family needs 0 < q < 1, got q={q}")
    # (w^3 - (q^2 + 2c) w) / (w^2 - q^2)
    num = Polynomial.of(0.0, -(q * q + 2.0 * c), 0.0, 1.0)
    den = Polynomial.of(-q * q, 0.0, 1.0)
    return RationalMap(num, den)


def pinch_crosses(q: float, c: float, grid: int = DOUBLE_POINT_GRID) -> bool:
    """True when the sampled boundary of f_c crosses itself."""
    z = sample_boundary(pinch_map(q, c), grid)
    return len(segment_crossings(z)) > 0


@dataclass(frozen=True)
class PinchResult:
    q: float
    c_star: float
    bracket: tuple[float, float]
    domain: QuadratureDomain
    singularity: Singularity

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "c_star": self.c_star,
            "bracket": list(self.bracket),
            "bracket_width": self.bracket[1] - self.bracket[0],
            "double_point": self.singularity.to_json(),
        }


@lru_cache(maxsize=8)
def pinch_search(
    q: float = PINCH_Q,
    c_lo: float = PINCH_BRACKET[0],
    c_hi: float = PINCH_BRACKET[1],
    tol: float = PINCH_TOL,
) -> PinchResult:
    """Bisect on c for the first self-contact of the boundary.

    Returns the last non-crossing parameter as c_star.
    Raises BadBracket.
    """
    if pinch_crosses(q, c_lo) or not pinch_crosses(q, c_hi):
        raise BadBracket(f"pinch(q={q}): [{c_lo}, {c_hi}] does not straddle the first self-contact")
    lo, hi = c_lo, c_hi
    steps = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pinch_crosses(q, mid):
            hi = mid
        else:
            lo = mid
        steps += 1

    try:
        Q = build_domain(pinch_map(q, lo), name=f"pinch({q:g})")
    except UnivalenceViolation as e:
        raise BadBracket(f"pinch(q={q}): lower endpoint c={lo:.15g} rejected: {e}") from e
    doubles = find_double_points(Q)
    if len(doubles) != 1:
        raise BadBracket(f"pinch(q={q}): expected one double point at c={lo:.15g}, found {len(doubles)}")
    log(f"[Pinch] q={q:g}: c*={lo:.12f} after {steps} bisection steps, double point at {doubles[0].location:.3g}")
    return PinchResult(q, lo, (lo, hi), Q, doubles[0])
