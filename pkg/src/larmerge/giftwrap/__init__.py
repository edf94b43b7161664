"""Extraction of d-cells by topological gift wrapping."""

from .extraction import BoundaryPlus, extract_cell, extract_cells, orient_coherently
from .hinges import HingeOrdering, build_hinge_ordering
from .volumes import identify_exterior, orient_positive, signed_volume

__all__ = [
    "BoundaryPlus",
    "HingeOrdering",
    "build_hinge_ordering",
    "extract_cell",
    "extract_cells",
    "identify_exterior",
    "orient_coherently",
    "orient_positive",
    "signed_volume",
]
