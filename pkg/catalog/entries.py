"""entries.py

The named catalog: explicit quadrature maps plus the circle and
anti-rational maps that accompany them.

Each quadrature entry records the counts its theorem report must show.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Callable

from catalog.pinch import pinch_search
from config import BOUNDARY_SAMPLES, PINCH_Q
from core.errors import InvalidInput, UnknownCatalogEntry
from core.quadrature import QuadratureDomain, build_domain
from core.rational import Polynomial, RationalMap
from utils.helpers import Bounds

__all__ = [
    "EntryKind",
    "CatalogEntry",
    "catalog",
    "lookup",
    "pinch_parameter",
    "quadrature_entries",
    "entry_domain",
]


class EntryKind(str, Enum):
    QUADRATURE = "QuadratureMap"
    CIRCLE = "CircleMap"
    ANTI_RATIONAL = "AntiRational"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: EntryKind
    description: str
    degree: int
    build: Callable[[], RationalMap] | None = field(default=None, repr=False, compare=False)
    expected: dict = field(default_factory=dict, compare=False)
    bounds: Bounds = Bounds(0j, 4.0, 4.0)

    @property
    def is_quadrature(self) -> bool:
        return self.kind is EntryKind.QUADRATURE

    def map(self) -> RationalMap:
        if self.build is None:
            raise UnknownCatalogEntry(f"{self.name!r} is a {self.kind.value}, not a quadrature map")
        return self.build()

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "kind": self.kind.value,
            "degree": self.degree,
            "description": self.description,
        }
        if self.is_quadrature:
            out["map"] = self.map().to_json()
            out["samples"] = BOUNDARY_SAMPLES
        return out


def _laurent(coeff: complex, power: int) -> Callable[[], RationalMap]:
    """w + coeff / w^power."""
    def build() -> RationalMap:
        num = Polynomial((coeff,) + (0,) * power + (1,))
        den = Polynomial((0,) * power + (1,))
        return RationalMap(num, den)
    return build


def _pinch(q: float = PINCH_Q) -> Callable[[], RationalMap]:
    """The pinch-family map at its first self-contact."""
    def build() -> RationalMap:
        return pinch_search(q).domain.f
    return build


_ENTRIES = (
    CatalogEntry(
        "quarter-cubed", EntryKind.QUADRATURE, "f(w) = w + 1/(4w^2), smooth Jordan boundary", 3,
        _laurent(0.25, 2),
        {"d_f": 3, "n_Omega": 1, "node_at_infinity": True, "conn": 1, "num_cusps": 0,
         "num_doubles": 0, "Delta": 0, "lhs_A_infty": 1, "rhs_A_infty": 1,
         "crit_tags": {"T": 3, "P": 1}},
    ),
    CatalogEntry(
        "half-cubed", EntryKind.QUADRATURE, "f(w) = w + 1/(2w^2), deltoid with three (3,2)-cusps", 3,
        _laurent(0.5, 2),
        {"d_f": 3, "n_Omega": 1, "node_at_infinity": True, "conn": 1, "num_cusps": 3,
         "num_doubles": 0, "Delta": 0, "lhs_B": 3, "rhs_B": 4,
         "crit_tags": {"C": 3, "P": 1}},
    ),
    CatalogEntry(
        "ellipse", EntryKind.QUADRATURE, "f(w) = w + 1/(2w), ellipse complement", 2,
        _laurent(0.5, 1),
        {"d_f": 2, "n_Omega": 1, "node_at_infinity": True, "conn": 1, "num_cusps": 0,
         "num_doubles": 0, "Delta": 0, "crit_tags": {"T": 2}},
    ),
    CatalogEntry(
        "astroid", EntryKind.QUADRATURE, "f(w) = w + 1/(3w^3), four (3,2)-cusps", 4,
        _laurent(1 / 3, 3),
        {"d_f": 4, "n_Omega": 1, "node_at_infinity": True, "conn": 1, "num_cusps": 4,
         "num_doubles": 0, "Delta": 0, "lhs_B": 4, "rhs_B": 7,
         "crit_tags": {"C": 4, "P": 2}},
    ),
    CatalogEntry(
        "pinch", EntryKind.QUADRATURE,
        "f(w) = w - c/(w-q) - c/(w+q), q = 0.5, c at the first boundary self-contact", 3,
        _pinch(),
        {"d_f": 3, "n_Omega": 2, "node_at_infinity": False, "conn": 1, "num_cusps": 0,
         "num_doubles": 1, "Delta": 0, "lhs_A": 2, "rhs_A": 2,
         "crit_tags": {"T": 4}},
    ),
    CatalogEntry("nielsen", EntryKind.CIRCLE, "reflections in the sides of the ideal triangle", 2,
                 bounds=Bounds(0j, 2.2, 2.2)),
    CatalogEntry("anti-farey", EntryKind.CIRCLE, "Nielsen map modulo the order-3 rotation", 2,
                 bounds=Bounds(0j, 2.2, 2.2)),
    CatalogEntry("apollonian", EntryKind.ANTI_RATIONAL, "R(z) = 3 conj(z)^2 / (2 conj(z)^3 + 1)", 3,
                 bounds=Bounds(0j, 4.0, 4.0)),
)


def catalog() -> tuple[CatalogEntry, ...]:
    return _ENTRIES


def quadrature_entries() -> tuple[CatalogEntry, ...]:
    return tuple(e for e in _ENTRIES if e.is_quadrature)


def pinch_parameter(name: str) -> float | None:
    """q of a "pinch" or "pinch(q)" name, None for any other name.

    Raises InvalidInput for an unparseable q or one outside (0, 1).
    """
    key = str(name).strip().lower()
    if key == "pinch":
        return PINCH_Q
    if not (key.startswith("pinch(") and key.endswith(")")):
        return None
    try:
        q = float(key[len("pinch("):-1])
    except ValueError as e:
        raise InvalidInput(f"cannot read q from {name!r}") from e
    if not 0.0 < q < 1.0:
        raise InvalidInput(f"pinch family needs 0 < q < 1, got {name!r}")
    return q


def _pinch_entry(q: float) -> CatalogEntry:
    base = next(e for e in _ENTRIES if e.name == "pinch")
    if q == PINCH_Q:
        return base
    # counts are only recorded for the default q
    return replace(
        base,
        name=f"pinch({q:g})",
        description=f"f(w) = w - c/(w-q) - c/(w+q), q = {q:g}, c at the first boundary self-contact",
        build=_pinch(q),
        expected={},
    )


def lookup(name: str) -> CatalogEntry:
    key = str(name).strip().lower().replace("_", "-")
    if key == "antifarey":
        key = "anti-farey"
    q = pinch_parameter(key)
    if q is not None:
        return _pinch_entry(q)
    for e in _ENTRIES:
        if e.name == key:
            return e
    raise UnknownCatalogEntry(f"no catalog entry named {name!r}")


@lru_cache(maxsize=None)
def entry_domain(name: str) -> QuadratureDomain:
    """Certified domain of a quadrature entry (cached per process)."""
    e = lookup(name)
    q = pinch_parameter(e.name)
    if q is not None:
        return pinch_search(q).domain
    return build_domain(e.map(), name=e.name)
