"""Hexagonal hierarchical spatial index over the icosahedron."""

from .grid import (
    MAX_RES,
    MIN_RES,
    CellBoundary,
    CellId,
    CellIndexError,
    GeoPoint,
    boundary_contains,
    cell_boundary,
    cell_to_latlng,
    edge_lengths_m,
    latlng_to_cell,
)

__all__ = [
    "MAX_RES",
    "MIN_RES",
    "CellBoundary",
    "CellId",
    "CellIndexError",
    "GeoPoint",
    "boundary_contains",
    "cell_boundary",
    "cell_to_latlng",
    "edge_lengths_m",
    "latlng_to_cell",
]
