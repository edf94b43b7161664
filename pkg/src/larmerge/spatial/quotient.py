"""Welding of nearly coincident vertices with a kd-tree."""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.spatial import cKDTree

from ..chains.cells import VertexBuffer

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class VertexQuotient:
    """Map from raw vertices to merged representatives."""

    representative: np.ndarray
    merged: VertexBuffer
    eps: float

    def __len__(self) -> int:
        return self.merged.n

    def remap(self, indices) -> np.ndarray:
        return self.representative[np.asarray(indices, dtype=np.int64)]


def quotient_vertices(raw: VertexBuffer, eps: float) -> VertexQuotient:
    """
    Collapse vertices within ``eps`` of each other.

    Vertices are visited in ascending index order; each unassigned vertex
    becomes a representative and absorbs the unassigned vertices in its
    ``eps``-ball, so the lowest index of every cluster wins.

    Args:
        raw: Vertex buffer to weld
        eps: Merge radius (Euclidean)

    Returns:
        Quotient with the raw -> merged index map and merged coordinates
    """
    if eps <= 0:
        raise ValueError(f"Merge radius must be positive, got {eps}")

    n = raw.n
    if n == 0:
        return VertexQuotient(np.zeros(0, dtype=np.int64), raw, eps)

    tree = cKDTree(raw.coords)
    pairs = tree.query_pairs(r=eps, output_type="ndarray")
    rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
    cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
    neighbours = sp.csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n)
    )

    owner = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        if owner[i] >= 0:
            continue
        owner[i] = i
        ball = neighbours.indices[neighbours.indptr[i] : neighbours.indptr[i + 1]]
        ball = ball[(ball > i) & (owner[ball] < 0)]
        owner[ball] = i

    reps, representative = np.unique(owner, return_inverse=True)
    merged = VertexBuffer(raw.coords[reps])
    if merged.n < n:
        logger.debug(f"Welded {n} vertices into {merged.n} (eps = {eps:.3g})")
    return VertexQuotient(representative.astype(np.int64), merged, eps)
