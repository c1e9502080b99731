"""quadrature.py

Unbounded simply connected quadrature domains Omega = f(exterior disk).

Features:
- build_domain(): certifies f univalent on the closed exterior disk
  (critical points, boundary self-crossings, sampled injectivity) and
  caches degrees, nodes and critical data
- membership(): Omega / boundary / droplet by counting f-preimages
- schwarz_reflect(): sigma(z) = f(1/conj(w)), w the exterior preimage
- nodes_of(), crit_sigma(), sigma_preimages()
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import qmc

from config import (
    BOUNDARY_BAND_TOL,
    BOUNDARY_SAMPLES,
    CRITICAL_VALUE_MARGIN,
    INJECTIVITY_SAMPLES,
    SEED,
    SEPARATION_GUARD_STEPS,
)
from core.boundary import (
    BoundaryContact,
    near_contacts,
    sample_boundary,
    segment_crossings,
    signed_gap,
)
from core.errors import AmbiguousBand, InvalidInput, OutsideDomain, UnivalenceViolation
from core.rational import INF, Point, RationalMap, Root, RootSet, batch_roots, is_inf
from utils.jsonio import point_to_json
from utils.logging import log, log_warn

__all__ = [
    "RegionTag",
    "Membership",
    "Node",
    "UnivalenceCertificate",
    "QuadratureDomain",
    "kappa",
    "build_domain",
    "domain_from_spec",
    "membership",
    "schwarz_reflect",
    "nodes_of",
    "crit_sigma",
    "sigma_preimages",
]


def kappa(w: Point) -> Point:
    """Reflection in the unit circle, w -> 1/conj(w)."""
    if is_inf(w):
        return 0j
    if w == 0:
        return INF
    return 1.0 / complex(w).conjugate()


class RegionTag(str, Enum):
    OMEGA = "OmegaInterior"
    BOUNDARY = "Boundary"
    DROPLET = "DropletInterior"


@dataclass(frozen=True)
class Membership:
    tag: RegionTag
    witness: Point | None
    preimages: RootSet = field(default_factory=RootSet, repr=False)


@dataclass(frozen=True)
class Node:
    location: Point
    weight: int


@dataclass(frozen=True)
class UnivalenceCertificate:
    """What the three univalence checks measured."""

    samples: int
    max_critical_modulus: float
    crossings: int
    min_gap: float
    near_contacts: tuple[BoundaryContact, ...]
    injectivity_samples: int
    injectivity_failures: int
    critical_value_margin: float

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "max_critical_modulus": self.max_critical_modulus,
            "crossings": self.crossings,
            "min_gap": self.min_gap,
            "near_contacts": len(self.near_contacts),
            "injectivity_samples": self.injectivity_samples,
            "injectivity_failures": self.injectivity_failures,
            "critical_value_margin": self.critical_value_margin,
        }


@dataclass(frozen=True)
class QuadratureDomain:
    f: RationalMap
    name: str
    d_f: int
    d_Omega: int
    n_Omega: int
    nodes: tuple[Node, ...]
    crit_f: RootSet
    certificate: UnivalenceCertificate
    band_tol: float = BOUNDARY_BAND_TOL

    @property
    def node_at_infinity(self) -> bool:
        return any(is_inf(n.location) for n in self.nodes)

    def sigma_at_inf(self) -> Point:
        """sigma(inf) = f(kappa(inf)) = f(0)."""
        return self.f(0j)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "d_f": self.d_f,
            "d_Omega": self.d_Omega,
            "n_Omega": self.n_Omega,
            "nodes": [{"z": point_to_json(n.location), "weight": n.weight} for n in self.nodes],
            "node_at_infinity": self.node_at_infinity,
            "certificate": self.certificate.to_json(),
        }


# =========================
# Construction
# =========================

def _injectivity_failures(f: RationalMap, count: int, tol: float, seed: int) -> int:
    """Count exterior sample points whose f-fiber has a second exterior point."""
    if count <= 0:
        return 0
    u = qmc.Halton(d=2, scramble=True, seed=seed).random(count)
    radius = 1.0 + 10.0 ** (-3.0 + 4.0 * u[:, 0])
    w = radius * np.exp(2j * np.pi * u[:, 1])
    z = f.eval_array(w)
    ok = np.isfinite(z)

    d = f.degree
    num = np.zeros(d + 1, dtype=complex)
    den = np.zeros(d + 1, dtype=complex)
    num[: len(f.num.coeffs)] = f.num.array
    den[: len(f.den.coeffs)] = f.den.array
    rows = num[None, :] - z[ok, None] * den[None, :]
    fibers = batch_roots(rows)
    exterior = np.sum(np.abs(fibers) > 1.0 + tol, axis=1)
    return int(np.sum(exterior != 1))


def build_domain(
    f: RationalMap,
    samples: int = BOUNDARY_SAMPLES,
    *,
    name: str = "",
    tol: float = BOUNDARY_BAND_TOL,
    seed: int = SEED,
) -> QuadratureDomain:
    """Certify f as the uniformizer of an unbounded quadrature domain."""
    label = name or "map"
    gap = f.degree_gap
    if gap <= 0:
        raise InvalidInput(f"{label}: f(inf) must be inf (unbounded domain); degree gap is {gap}")
    if gap >= 2:
        raise UnivalenceViolation(f"{label}: pole of order {gap} at infinity, f is not injective near inf")

    poles = f.poles().finite()
    for p in poles:
        if abs(p.location) > 1.0 - tol:
            raise UnivalenceViolation(
                f"{label}: second pole at {p.location:.6g} in the closed exterior disk"
            )

    crit = f.critical_points()
    finite_crit = [r.location for r in crit.finite()]
    max_crit = max((abs(c) for c in finite_crit), default=0.0)
    if max_crit > 1.0 + tol:
        raise UnivalenceViolation(
            f"{label}: critical point of f at modulus {max_crit:.9g} outside the unit disk"
        )

    z = sample_boundary(f, samples)
    crossings = segment_crossings(z)
    if len(crossings):
        i, j = crossings[0]
        raise UnivalenceViolation(
            f"{label}: boundary crosses itself ({len(crossings)} crossings, "
            f"first between samples {i} and {j})"
        )
    step = float(np.max(np.abs(np.roll(z, -1) - z)))
    contacts = tuple(near_contacts(z, 4 * step, SEPARATION_GUARD_STEPS))
    min_gap = signed_gap(z, SEPARATION_GUARD_STEPS)

    failures = _injectivity_failures(f, INJECTIVITY_SAMPLES, tol, seed)
    if failures:
        raise UnivalenceViolation(f"{label}: {failures} exterior samples share their f-image")

    nodes = tuple(
        Node(f(kappa(p.location)), p.multiplicity)
        for p in sorted(poles, key=lambda r: (round(r.location.real, 9), round(r.location.imag, 9)))
    )
    d_f = f.degree
    d_omega = d_f - 1
    if sum(n.weight for n in nodes) != d_omega:
        raise UnivalenceViolation(
            f"{label}: node weights sum to {sum(n.weight for n in nodes)}, expected {d_omega}"
        )
    if crit.total != 2 * d_f - 2:
        log_warn(f"[Quadrature] {label}: critical multiplicity {crit.total} != 2d_f-2 = {2 * d_f - 2}")

    margin = _critical_value_margin(f, crit, z, tol)
    if margin < CRITICAL_VALUE_MARGIN:
        log_warn(f"[Quadrature] {label}: a critical value of sigma lies {margin:.3g} from the boundary")

    cert = UnivalenceCertificate(
        samples=samples,
        max_critical_modulus=float(max_crit),
        crossings=0,
        min_gap=float(min_gap),
        near_contacts=contacts,
        injectivity_samples=INJECTIVITY_SAMPLES,
        injectivity_failures=0,
        critical_value_margin=float(margin),
    )
    if contacts:
        log(f"[Quadrature] {label}: {len(contacts)} tangential near-contacts flagged")
    log(f"[Quadrature] accepted {label}: d_f={d_f}, d_Omega={d_omega}, n_Omega={len(nodes)}")
    return QuadratureDomain(
        f=f,
        name=name,
        d_f=d_f,
        d_Omega=d_omega,
        n_Omega=len(nodes),
        nodes=nodes,
        crit_f=crit,
        certificate=cert,
        band_tol=tol,
    )


def _critical_value_margin(f: RationalMap, crit: RootSet, boundary: np.ndarray, tol: float) -> float:
    """Distance from the finite critical values of sigma to the sampled boundary."""
    values = []
    for r in crit.finite():
        c = r.location
        if abs(c) < 1.0 - tol:
            v = f(c)
            if not is_inf(v):
                values.append(v)
    if not values:
        return float("inf")
    pts = np.column_stack([boundary.real, boundary.imag])
    vals = np.array(values, dtype=complex)
    dist, _ = cKDTree(pts).query(np.column_stack([vals.real, vals.imag]))
    return float(np.min(dist))


def domain_from_spec(data: object) -> QuadratureDomain:
    """Build from domain-spec JSON: {"name", "map": {...}, "samples"}."""
    if not isinstance(data, dict) or "map" not in data:
        raise InvalidInput("domain spec needs a 'map' entry")
    f = RationalMap.from_json(data["map"])
    samples = data.get("samples", BOUNDARY_SAMPLES)
    if not isinstance(samples, int) or samples < 64:
        raise InvalidInput(f"'samples' must be an integer >= 64, got {samples!r}")
    return build_domain(f, samples, name=str(data.get("name", "")))


# =========================
# Queries
# =========================

def membership(Q: QuadratureDomain, z: Point, tol: float | None = None) -> Membership:
    tol = Q.band_tol if tol is None else tol
    if is_inf(z):
        return Membership(RegionTag.OMEGA, INF, Q.f.preimages(INF))

    fiber = Q.f.preimages(z)
    exterior: list[Root] = []
    band: list[Root] = []
    for r in fiber:
        if is_inf(r.location):
            exterior.append(r)
            continue
        m = abs(r.location)
        if m > 1.0 + tol:
            exterior.append(r)
        elif m >= 1.0 - tol:
            band.append(r)

    n_ext = sum(r.multiplicity for r in exterior)
    if n_ext > 1 or (n_ext == 1 and band):
        raise AmbiguousBand(
            f"z={complex(z):.9g}: {n_ext} exterior and {len(band)} boundary-band preimages"
        )
    if n_ext == 1:
        return Membership(RegionTag.OMEGA, exterior[0].location, fiber)
    if band:
        witness = max(band, key=lambda r: abs(r.location)).location
        return Membership(RegionTag.BOUNDARY, witness, fiber)
    return Membership(RegionTag.DROPLET, None, fiber)


def schwarz_reflect(Q: QuadratureDomain, z: Point) -> Point:
    m = membership(Q, z)
    if m.tag is RegionTag.DROPLET:
        raise OutsideDomain(f"sigma is undefined in the droplet interior (z={complex(z):.9g})")
    w = m.witness
    if m.tag is RegionTag.BOUNDARY:
        w = complex(w) / abs(w)
        return Q.f(w)
    return Q.f(kappa(w))


def nodes_of(Q: QuadratureDomain) -> tuple[Node, ...]:
    return Q.nodes


def crit_sigma(Q: QuadratureDomain) -> RootSet:
    """f(kappa(c)) for critical points c of f in the open unit disk.

    Multiple poles of f appear in crit_f with multiplicity (order - 1), so
    they land on the corresponding node with the right weight.
    """
    out = []
    for r in Q.crit_f.finite():
        if abs(r.location) < 1.0 - Q.band_tol:
            out.append(Root(Q.f(kappa(r.location)), r.multiplicity))
    return RootSet(tuple(out)).sorted()


def sigma_preimages(Q: QuadratureDomain, z: Point) -> RootSet:
    """Points of the closed domain that sigma maps to z, with multiplicity."""
    out = []
    for r in Q.f.preimages(z):
        v = r.location
        if is_inf(v) or abs(v) > 1.0 + Q.band_tol:
            continue
        out.append(Root(Q.f(kappa(v)), r.multiplicity))
    return RootSet(tuple(out))
