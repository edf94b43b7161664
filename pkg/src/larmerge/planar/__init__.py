"""Planar arrangement of line segments."""

from .graph import (
    LinearGraph,
    biconnected_filter,
    bounded_face_count,
    dangling_edges,
    vertex_cycles,
)
from .segments import Crossing, SegmentSoup, fragment, intersect_pair, split_parameters

__all__ = [
    "Crossing",
    "LinearGraph",
    "SegmentSoup",
    "biconnected_filter",
    "bounded_face_count",
    "dangling_edges",
    "fragment",
    "intersect_pair",
    "split_parameters",
    "vertex_cycles",
]
