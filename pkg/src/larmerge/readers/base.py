"""Base reader interface and the shared assembly of loaded cell arrays."""

import logging
from abc import ABC, abstractmethod
from typing import Mapping, Optional, Sequence

from ..chains.cells import CellArray, VertexBuffer, canonicalize, point_cells
from ..chains.complex import ChainComplex, Skeleton, boundary3
from ..chains.operators import SignedOperator, boundary1, boundary2
from ..errors import EmptyInputError
from ..pipeline.merge import derive_edges

logger = logging.getLogger(__name__)


class BaseReader(ABC):
    """Abstract base class for readers that load a file into a chain complex."""

    @abstractmethod
    def read(self, file_path: str) -> ChainComplex:
        """
        Load a file into a canonical chain complex.

        Args:
            file_path: Path to the input file

        Returns:
            Chain complex with vertices, cell arrays and boundary operators
        """
        pass

    @abstractmethod
    def detect_format(self, file_path: str) -> bool:
        """
        Check if this reader can handle the given file.

        Args:
            file_path: Path to the input file

        Returns:
            True if this reader can handle the format
        """
        pass

    def get_format_name(self) -> str:
        """Get the name of the format this reader handles."""
        return self.__class__.__name__.replace("Reader", "").lower()


def _operator(
    triples: Optional[Sequence[Sequence[int]]], shape: tuple[int, int], p: int
) -> Optional[SignedOperator]:
    if triples is None:
        return None
    return SignedOperator.from_triples([tuple(t) for t in triples], shape, p - 1, p)


def build_complex(
    vertices: VertexBuffer,
    edges: Optional[CellArray] = None,
    faces: Optional[CellArray] = None,
    cells: Optional[CellArray] = None,
    operators: Optional[Mapping[str, Sequence[Sequence[int]]]] = None,
) -> ChainComplex:
    """
    Canonicalize loaded cell arrays and attach their boundary operators.

    Operators given as triples are used as they are; missing ones are
    assembled from the cell arrays and the geometry. Faces without edges get
    their edges derived from the face geometry.

    Raises:
        EmptyInputError: If there are no vertices
        MalformedInputError: If an index is out of range or a face is not closed
    """
    if vertices.n == 0:
        raise EmptyInputError("Document has no vertices")
    operators = operators or {}
    n = vertices.n

    if faces is not None and edges is None:
        edges = derive_edges(vertices, canonicalize(faces, n)[0])
        logger.debug(f"Derived {len(edges)} edges from face boundaries")

    skeletons = [point_cells(n)]
    ops = []
    if edges is not None:
        edges, _ = canonicalize(edges, n)
        skeletons.append(edges)
        d1 = _operator(operators.get("d1"), (n, len(edges)), 1)
        ops.append(d1 or boundary1(edges, n_vertices=n))
    if faces is not None:
        faces, _ = canonicalize(faces, n)
        skeletons.append(faces)
        d2 = _operator(operators.get("d2"), (len(edges), len(faces)), 2)
        ops.append(d2 or boundary2(faces, edges, vertices))
    if cells is not None and faces is not None:
        cells, _ = canonicalize(cells, n)
        skeletons.append(cells)
        d3 = _operator(operators.get("d3"), (len(faces), len(cells)), 3)
        if d3 is None:
            d3 = boundary3(cells, Skeleton.spatial(vertices, edges, faces, ops[1]))
        ops.append(d3)

    complex_ = ChainComplex(vertices, tuple(skeletons), tuple(ops))
    logger.info(f"Loaded complex with f-vector {complex_.f_vector}")
    return complex_
