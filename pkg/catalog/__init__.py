# catalog package - worked examples: quadrature maps, reflection groups, Apollonian map
from catalog.entries import EntryKind, CatalogEntry, catalog, lookup, quadrature_entries, entry_domain
from catalog.groups import (
    GeodesicReflection,
    NIELSEN_GEODESICS,
    nielsen,
    anti_farey,
    nielsen_circle_derivative,
    circle_winding,
    ideal_triangle_boundary,
    group_raster,
)
from catalog.apollonian import apollonian_R, apollonian_fixed_points
from catalog.pinch import pinch_map, pinch_search

__all__ = [
    # entries
    "EntryKind",
    "CatalogEntry",
    "catalog",
    "lookup",
    "quadrature_entries",
    "entry_domain",
    # reflection groups
    "GeodesicReflection",
    "NIELSEN_GEODESICS",
    "nielsen",
    "anti_farey",
    "nielsen_circle_derivative",
    "circle_winding",
    "ideal_triangle_boundary",
    "group_raster",
    # apollonian
    "apollonian_R",
    "apollonian_fixed_points",
    # pinch family
    "pinch_map",
    "pinch_search",
]
