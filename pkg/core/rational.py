"""rational.py

Rational functions on the Riemann sphere.

Features:
- INF sentinel for the point at infinity (equal only to itself)
- Polynomial with ascending complex coefficients, Horner evaluation
- RationalMap with numeric common-root cancellation, chart-switched
  evaluation, quotient-rule derivative, fibers and critical points with
  multiplicity (poles and infinity included)
- roots() via companion-matrix eigenvalues with Newton polish and
  clustering; batch_roots() for many same-degree polynomials at once
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from config import MAX_USER_DEGREE, ROOT_CLUSTER_TOL, ROOT_RESIDUAL_TOL
from core.errors import InvalidInput, RootFindingFailure

__all__ = [
    "INF",
    "Point",
    "is_inf",
    "Polynomial",
    "Root",
    "RootSet",
    "RationalMap",
    "roots",
    "companion",
    "batch_roots",
]


# =========================
# Point at infinity
# =========================

class _Infinity:
    """The point at infinity. There is exactly one instance, INF."""

    _instance: "_Infinity | None" = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("point-at-infinity")

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Point = Union[complex, _Infinity]


def is_inf(z: object) -> bool:
    return z is INF


# Merge radius floor: a double root from companion eigenvalues is only
# accurate to about sqrt(machine epsilon).
_CLUSTER_FLOOR = 16.0 * math.sqrt(np.finfo(float).eps)


# =========================
# Polynomial
# =========================

@dataclass(frozen=True)
class Polynomial:
    """Ascending-degree complex coefficients; trailing zeros are trimmed."""

    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        cs = [complex(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -------------------------
    # Construction
    # -------------------------

    @classmethod
    def of(cls, *coeffs: complex) -> "Polynomial":
        return cls(tuple(coeffs))

    @classmethod
    def from_roots(cls, locations: Iterable[complex], leading: complex = 1.0) -> "Polynomial":
        desc = np.poly(np.asarray(list(locations), dtype=complex)) * leading
        return cls(tuple(np.atleast_1d(desc)[::-1]))

    # -------------------------
    # Properties
    # -------------------------

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> complex:
        return self.coeffs[-1] if self.coeffs else 0j

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    @property
    def low_order_zeros(self) -> int:
        """Multiplicity of w=0 as a root (exact zero coefficients)."""
        k = 0
        for c in self.coeffs:
            if c != 0:
                break
            k += 1
        return k

    def scale_at(self, z: complex) -> float:
        """Sum of |c_k| |z|^k, the natural size of P(z)."""
        r = abs(z)
        return float(sum(abs(c) * r**k for k, c in enumerate(self.coeffs)))

    # -------------------------
    # Arithmetic
    # -------------------------

    def __call__(self, z):
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] += self.array
        a[: len(other.coeffs)] += other.array
        return Polynomial(tuple(a))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial | complex") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial(tuple(c * complex(other) for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return Polynomial(())
        return Polynomial(tuple(np.convolve(self.array, other.array)))

    __rmul__ = __mul__

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def shift_down(self, k: int) -> "Polynomial":
        """Divide by w^k (drops the k lowest coefficients)."""
        return Polynomial(self.coeffs[k:])

    def deflate(self, root: complex) -> "Polynomial":
        """Quotient by (w - root), remainder discarded (synthetic division)."""
        out: list[complex] = []
        acc = 0j
        for c in reversed(self.coeffs[1:]):
            acc = acc * root + c
            out.append(acc)
        return Polynomial(tuple(reversed(out)))

    def trimmed(self, rel: float) -> "Polynomial":
        """Drop top coefficients below rel * max|c| (cancellation noise)."""
        cs = list(self.coeffs)
        if not cs:
            return self
        big = max(abs(c) for c in cs)
        while cs and abs(cs[-1]) <= rel * big:
            cs.pop()
        return Polynomial(tuple(cs))

    def to_json(self) -> list[list[float]]:
        return [[c.real, c.imag] for c in self.coeffs]


# =========================
# Root sets
# =========================

@dataclass(frozen=True)
class Root:
    location: Point
    multiplicity: int


@dataclass(frozen=True)
class RootSet:
    """Points on the sphere with positive multiplicities."""

    roots: tuple[Root, ...] = ()

    def __iter__(self) -> Iterator[Root]:
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def total(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    @property
    def locations(self) -> list[Point]:
        return [r.location for r in self.roots]

    def finite(self) -> "RootSet":
        return RootSet(tuple(r for r in self.roots if not is_inf(r.location)))

    def multiplicity_of_inf(self) -> int:
        return sum(r.multiplicity for r in self.roots if is_inf(r.location))

    def merged(self, other: "RootSet") -> "RootSet":
        return RootSet(self.roots + other.roots)

    def sorted(self) -> "RootSet":
        """Deterministic order: finite by (re, im), infinity last."""
        def key(r: Root):
            if is_inf(r.location):
                return (1, 0.0, 0.0)
            return (0, round(r.location.real, 9), round(r.location.imag, 9))
        return RootSet(tuple(sorted(self.roots, key=key)))


def _cluster(points: Sequence[complex], tol: float) -> list[tuple[complex, int]]:
    """Single-linkage clustering; returns (mean, count) per cluster."""
    n = len(points)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = max(1.0, abs(points[i]), abs(points[j]))
            if abs(points[i] - points[j]) <= tol * scale:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri

    groups: dict[int, list[complex]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(points[i])
    return [(complex(np.mean(g)), len(g)) for g in groups.values()]


def companion(coeffs: np.ndarray) -> np.ndarray:
    """Companion matrix of an ascending coefficient vector (nonzero leading)."""
    monic = coeffs[:-1] / coeffs[-1]
    d = monic.shape[0]
    c = np.zeros((d, d), dtype=complex)
    if d > 1:
        c[np.arange(1, d), np.arange(d - 1)] = 1.0
    c[:, -1] = -monic
    return c


def _polish(p: Polynomial, dp: Polynomial, r: complex, steps: int = 3) -> complex:
    for _ in range(steps):
        val = p(r)
        slope = dp(r)
        if slope == 0:
            break
        step = val / slope
        if not np.isfinite(step) or abs(step) > 1e-3 * max(1.0, abs(r)):
            break
        cand = r - step
        if abs(p(cand)) >= abs(val):
            break
        r = cand
    return r


def roots(P: Polynomial, tol: float = ROOT_CLUSTER_TOL) -> RootSet:
    """All complex roots of P with multiplicity.

    Exact zero roots are split off first; the rest come from companion
    eigenvalues, Newton-polished and clustered.
    """
    if P.degree < 1:
        raise InvalidInput(f"roots() needs degree >= 1, got degree {P.degree}")

    k0 = P.low_order_zeros
    rest = P.shift_down(k0)
    raw: list[complex] = [0j] * k0
    if rest.degree >= 1:
        try:
            eig = np.linalg.eigvals(companion(rest.array))
        except np.linalg.LinAlgError as e:
            raise RootFindingFailure(f"eigenvalue solver failed: {e}") from e
        if not np.all(np.isfinite(eig)):
            raise RootFindingFailure("non-finite roots from companion matrix")
        dp = rest.derivative()
        raw.extend(_polish(rest, dp, complex(r)) for r in eig)

    clusters = _cluster(raw, max(tol, _CLUSTER_FLOOR))
    for loc, _m in clusters:
        scale = P.scale_at(loc)
        if scale > 0 and abs(P(loc)) / scale > ROOT_RESIDUAL_TOL:
            raise RootFindingFailure(
                f"root residual {abs(P(loc)) / scale:.3e} too large at {loc}"
            )
    return RootSet(tuple(Root(loc, m) for loc, m in clusters)).sorted()


def batch_roots(coeff_rows: np.ndarray) -> np.ndarray:
    """Roots of N same-degree polynomials: (N, d+1) ascending -> (N, d).

    The leading column must be nonzero in every row.
    """
    lead = coeff_rows[:, -1:]
    monic = coeff_rows[:, :-1] / lead
    n, d = monic.shape
    comp = np.zeros((n, d, d), dtype=complex)
    if d > 1:
        comp[:, np.arange(1, d), np.arange(d - 1)] = 1.0
    comp[:, :, -1] = -monic
    return np.linalg.eigvals(comp)


# =========================
# Rational maps
# =========================

def _cancel_common(num: Polynomial, den: Polynomial, tol: float) -> tuple[Polynomial, Polynomial]:
    k = min(num.low_order_zeros, den.low_order_zeros)
    if k:
        num, den = num.shift_down(k), den.shift_down(k)
    if num.degree < 1 or den.degree < 1:
        return num, den

    # Loose grouping: the mean of an eigenvalue cluster is accurate even when
    # its members are not.
    for root in roots(den, tol=1e-3):
        p = root.location
        for _ in range(root.multiplicity):
            if num.degree < 1:
                break
            scale = num.scale_at(p)
            if scale == 0 or abs(num(p)) > 1e3 * tol * scale:
                break
            num, den = num.deflate(p), den.deflate(p)
    return num, den


@dataclass(frozen=True)
class RationalMap:
    """num/den with no common roots; degree = max(deg num, deg den)."""

    num: Polynomial
    den: Polynomial

    def __post_init__(self) -> None:
        if self.den.is_zero:
            raise InvalidInput("rational map denominator is the zero polynomial")
        num, den = _cancel_common(self.num, self.den, ROOT_CLUSTER_TOL)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    # -------------------------
    # Construction / JSON
    # -------------------------

    @classmethod
    def polynomial(cls, *coeffs: complex) -> "RationalMap":
        return cls(Polynomial(coeffs), Polynomial.of(1))

    @classmethod
    def identity(cls) -> "RationalMap":
        return cls.polynomial(0, 1)

    @classmethod
    def from_json(cls, data: object, *, max_degree: int = MAX_USER_DEGREE) -> "RationalMap":
        if not isinstance(data, dict) or "numerator" not in data or "denominator" not in data:
            raise InvalidInput("rational map JSON needs 'numerator' and 'denominator'")
        num = _poly_from_json(data["numerator"], "numerator")
        den = _poly_from_json(data["denominator"], "denominator")
        if den.is_zero:
            raise InvalidInput("denominator is the zero polynomial")
        R = cls(num, den)
        if R.degree < 1:
            raise InvalidInput("rational map must have degree >= 1")
        if R.degree > max_degree:
            raise InvalidInput(f"degree {R.degree} exceeds the cap of {max_degree}")
        return R

    def to_json(self) -> dict:
        return {"numerator": self.num.to_json(), "denominator": self.den.to_json()}

    # -------------------------
    # Degree data
    # -------------------------

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    @property
    def degree_gap(self) -> int:
        """deg num - deg den; positive means a pole at infinity of that order."""
        return self.num.degree - self.den.degree

    # -------------------------
    # Evaluation
    # -------------------------

    def value_at_inf(self) -> Point:
        gap = self.degree_gap
        if gap > 0:
            return INF
        if gap < 0:
            return 0j
        return self.num.leading / self.den.leading

    def __call__(self, z: Point) -> Point:
        if is_inf(z):
            return self.value_at_inf()
        z = complex(z)
        if abs(z) <= 2.0:
            n, d = self.num(z), self.den(z)
            if d == 0:
                return INF
            out = n / d
        else:
            u = 1.0 / z
            n_rev = Polynomial(tuple(reversed(self.num.coeffs)))(u)
            d_rev = Polynomial(tuple(reversed(self.den.coeffs)))(u)
            if d_rev == 0:
                return INF
            try:
                out = z ** self.degree_gap * (n_rev / d_rev)
            except OverflowError:
                return INF
        if not (math.isfinite(out.real) and math.isfinite(out.imag)):
            return INF
        return out

    def eval_array(self, z: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on finite points; poles come back non-finite."""
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            n = np.polyval(self.num.array[::-1], z)
            d = np.polyval(self.den.array[::-1], z)
            return n / d

    def derivative(self) -> "RationalMap":
        n, d = self.num, self.den
        return RationalMap(n.derivative() * d - n * d.derivative(), d * d)

    def derivative_at(self, z: complex) -> complex:
        n, d = self.num, self.den
        dz = d(z)
        return (n.derivative()(z) * dz - n(z) * d.derivative()(z)) / (dz * dz)

    # -------------------------
    # Fibers and critical points
    # -------------------------

    def poles(self, tol: float = ROOT_CLUSTER_TOL) -> RootSet:
        finite = roots(self.den, tol) if self.den.degree >= 1 else RootSet()
        if self.degree_gap > 0:
            return finite.merged(RootSet((Root(INF, self.degree_gap),)))
        return finite

    def preimages(self, z: Point, tol: float = ROOT_CLUSTER_TOL) -> RootSet:
        """Solutions of R(w) = z with multiplicity; total is always deg R."""
        if is_inf(z):
            return self.poles(tol)
        P = (self.num - self.den * complex(z)).trimmed(1e-14)
        if P.degree < 0:
            raise InvalidInput("constant fiber: R is identically equal to z")
        found = roots(P, tol) if P.degree >= 1 else RootSet()
        missing = self.degree - P.degree
        if missing > 0:
            found = found.merged(RootSet((Root(INF, missing),)))
        return found

    def local_degree_at_inf(self) -> int:
        gap = self.degree_gap
        if gap > 0:
            return gap
        L = self.value_at_inf()
        rest = (self.num - self.den * complex(L)).trimmed(1e-12)
        return self.den.degree - max(rest.degree, 0)

    def critical_points(self, tol: float = ROOT_CLUSTER_TOL) -> RootSet:
        """Critical points on the sphere with multiplicity (sums to 2d - 2)."""
        dnum = self.derivative().num
        found = roots(dnum, tol) if dnum.degree >= 1 else RootSet()
        extra: list[Root] = []
        if self.den.degree >= 1:
            for pole in roots(self.den, tol):
                if pole.multiplicity >= 2:
                    extra.append(Root(pole.location, pole.multiplicity - 1))
        inf_mult = self.local_degree_at_inf() - 1
        if inf_mult > 0:
            extra.append(Root(INF, inf_mult))
        return found.merged(RootSet(tuple(extra))).sorted()


def _poly_from_json(data: object, label: str) -> Polynomial:
    if not isinstance(data, list):
        raise InvalidInput(f"{label} must be a list of [re, im] pairs")
    coeffs: list[complex] = []
    for item in data:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise InvalidInput(f"{label}: each coefficient must be [re, im], got {item!r}")
        try:
            re, im = float(item[0]), float(item[1])
        except (TypeError, ValueError) as e:
            raise InvalidInput(f"{label}: non-numeric coefficient {item!r}") from e
        if not (math.isfinite(re) and math.isfinite(im)):
            raise InvalidInput(f"{label}: non-finite coefficient {item!r}")
        coeffs.append(complex(re, im))
    return Polynomial(tuple(coeffs))
