"""LAR cell arrays and vertex buffers."""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from ..errors import DimensionMismatchError, MalformedInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VertexBuffer:
    """Coordinates of the 0-cells, one row per vertex."""

    coords: np.ndarray

    def __post_init__(self):
        coords = np.array(self.coords, dtype=np.float64, copy=True)
        if coords.ndim == 1 and coords.size == 0:
            coords = coords.reshape(0, 2)
        if coords.ndim != 2 or coords.shape[1] not in (2, 3):
            raise DimensionMismatchError(
                f"Vertex buffer must be n x 2 or n x 3, got shape {coords.shape}"
            )
        if not np.all(np.isfinite(coords)):
            raise MalformedInputError("Vertex coordinates must be finite")
        coords.flags.writeable = False
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_list(cls, rows: Sequence[Sequence[float]]) -> "VertexBuffer":
        if len(rows) == 0:
            return cls(np.zeros((0, 2)))
        arity = {len(r) for r in rows}
        if len(arity) != 1:
            raise MalformedInputError(f"Non-uniform coordinate arity: {sorted(arity)}")
        return cls(np.asarray(rows, dtype=np.float64))

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, index):
        return self.coords[index]

    def to_list(self) -> list[list[float]]:
        return self.coords.tolist()


@dataclass(frozen=True)
class CellArray:
    """Cells of one dimension as lists of vertex indices (a readable M_p)."""

    dim: int
    cells: tuple[tuple[int, ...], ...] = field(default_factory=tuple)

    def __post_init__(self):
        cells = tuple(tuple(int(v) for v in cell) for cell in self.cells)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_list(cls, dim: int, cells: Iterable[Iterable[int]]) -> "CellArray":
        return cls(dim, tuple(tuple(c) for c in cells))

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __getitem__(self, index: int) -> tuple[int, ...]:
        return self.cells[index]

    def to_list(self) -> list[list[int]]:
        return [list(c) for c in self.cells]

    def is_canonical(self) -> bool:
        seen = set()
        for cell in self.cells:
            if any(a >= b for a, b in zip(cell, cell[1:])) or cell in seen:
                return False
            seen.add(cell)
        return True

    def max_index(self) -> int:
        return max((max(c) for c in self.cells if c), default=-1)

    def characteristic_matrix(self, n_vertices: Optional[int] = None) -> sp.csr_matrix:
        """Binary matrix with one row per cell and one column per vertex."""
        n = self.max_index() + 1 if n_vertices is None else n_vertices
        rows = np.repeat(np.arange(len(self.cells)), [len(c) for c in self.cells])
        cols = np.fromiter((v for c in self.cells for v in c), dtype=np.int64, count=len(rows))
        data = np.ones(len(rows), dtype=np.int8)
        matrix = sp.csr_matrix((data, (rows, cols)), shape=(len(self.cells), n), dtype=np.int8)
        # repeated vertices inside a raw cell must not count twice
        matrix.data[:] = 1
        return matrix


def canonicalize(
    cells: CellArray, n_vertices: Optional[int] = None
) -> tuple[CellArray, np.ndarray]:
    """
    Sort each cell and drop duplicates, keeping first occurrences in order.

    Args:
        cells: Raw cell array
        n_vertices: Size of the vertex buffer, used for range checks

    Returns:
        Canonical cell array and the old-index -> new-index mapping

    Raises:
        MalformedInputError: If a vertex index is negative or out of range
    """
    mapping = np.empty(len(cells), dtype=np.int64)
    index: dict[tuple[int, ...], int] = {}
    out: list[tuple[int, ...]] = []

    for i, cell in enumerate(cells.cells):
        key = tuple(sorted(set(cell)))
        if key and key[0] < 0:
            raise MalformedInputError(f"Negative vertex index in cell {i}: {list(cell)}")
        if n_vertices is not None and key and key[-1] >= n_vertices:
            raise MalformedInputError(
                f"Vertex index {key[-1]} out of range in cell {i} (n = {n_vertices})"
            )
        if key not in index:
            index[key] = len(out)
            out.append(key)
        mapping[i] = index[key]

    if len(out) < len(cells):
        logger.debug(f"Removed {len(cells) - len(out)} duplicate {cells.dim}-cells")

    return CellArray(cells.dim, tuple(out)), mapping


def point_cells(n_vertices: int) -> CellArray:
    """The 0-skeleton [[0], [1], ...]."""
    return CellArray(0, tuple((i,) for i in range(n_vertices)))
