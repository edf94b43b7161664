"""Cells, chains and signed boundary operators in LAR form."""

from .cells import CellArray, VertexBuffer, canonicalize, point_cells
from .complex import ChainComplex, Skeleton, boundary3
from .operators import (
    Chain,
    SignedOperator,
    adjacency,
    apply,
    boundary1,
    boundary2,
    coboundary,
)

__all__ = [
    "CellArray",
    "Chain",
    "ChainComplex",
    "SignedOperator",
    "Skeleton",
    "VertexBuffer",
    "adjacency",
    "apply",
    "boundary1",
    "boundary2",
    "boundary3",
    "canonicalize",
    "coboundary",
    "point_cells",
]
