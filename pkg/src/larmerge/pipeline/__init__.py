"""Facet subdivision and the merge of complexes into an arrangement."""

from .facets import FacetFragment, section_soup, subdivide_facet
from .merge import (
    Arrangement,
    arrange_segments,
    box_complex,
    compact_skeleton,
    derive_edges,
    locate_point,
    merge,
    prune_dangling_faces,
    weld_fragments,
)
from .section import plane_section
from .submanifold import SubmanifoldMap, plane_map, submanifold_map

__all__ = [
    "Arrangement",
    "FacetFragment",
    "SubmanifoldMap",
    "arrange_segments",
    "box_complex",
    "compact_skeleton",
    "derive_edges",
    "locate_point",
    "merge",
    "plane_map",
    "plane_section",
    "prune_dangling_faces",
    "section_soup",
    "subdivide_facet",
    "submanifold_map",
    "weld_fragments",
]
