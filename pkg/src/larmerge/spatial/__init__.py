"""Spatial accelerators: interval-tree box index and kd-tree vertex welding."""

from .index import BoxSet, IntervalIndex, build_index, possible_intersections
from .quotient import VertexQuotient, quotient_vertices

__all__ = [
    "BoxSet",
    "IntervalIndex",
    "VertexQuotient",
    "build_index",
    "possible_intersections",
    "quotient_vertices",
]
