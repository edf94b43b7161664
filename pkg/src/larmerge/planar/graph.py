"""Linear graphs: biconnected filtering and angular edge orderings."""

import logging
from dataclasses import dataclass
from typing import Optional

import networkx as nx
import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from ..chains.cells import CellArray, VertexBuffer
from ..errors import DegenerateGeometryError

logger = logging.getLogger(__name__)

ANGLE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class LinearGraph:
    """A planar 1-complex: 2D vertices and canonical edges."""

    vertices: VertexBuffer
    edges: CellArray
    parent_vertices: Optional[np.ndarray] = None

    @property
    def n_vertices(self) -> int:
        return self.vertices.n

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_array(self) -> np.ndarray:
        return np.array(self.edges.cells, dtype=np.int64).reshape(-1, 2)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edge_array().ravel(), minlength=self.n_vertices)

    def compacted(self, keep_edges: Optional[np.ndarray] = None) -> "LinearGraph":
        """Drop unused vertices (and edges outside ``keep_edges``), renumbering in order."""
        ev = self.edge_array()
        if keep_edges is not None:
            ev = ev[keep_edges]
        used = np.unique(ev)
        remap = np.full(self.n_vertices, -1, dtype=np.int64)
        remap[used] = np.arange(len(used))
        parent = used if self.parent_vertices is None else self.parent_vertices[used]
        edges = CellArray(1, tuple(map(tuple, remap[ev].tolist())))
        return LinearGraph(VertexBuffer(self.vertices.coords[used].reshape(-1, 2)), edges, parent)

    def components(self) -> tuple[int, np.ndarray]:
        ev = self.edge_array()
        n = self.n_vertices
        adjacency = sp.csr_matrix(
            (np.ones(len(ev), dtype=np.int8), (ev[:, 0], ev[:, 1])), shape=(n, n)
        )
        return connected_components(adjacency, directed=False)


def _to_networkx(g: LinearGraph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n_vertices))
    graph.add_edges_from(g.edges.cells)
    return graph


def _cyclic_edges(g: LinearGraph) -> np.ndarray:
    keep: set[tuple[int, int]] = set()
    for component in nx.biconnected_component_edges(_to_networkx(g)):
        nodes = {v for edge in component for v in edge}
        if len(nodes) >= 3:
            keep.update((min(e), max(e)) for e in component)
    return np.array([tuple(e) in keep for e in g.edges.cells], dtype=bool)


def biconnected_filter(g: LinearGraph) -> LinearGraph:
    """
    Keep the union of maximal biconnected components with at least 3 vertices.

    Bridges and tree parts are removed, isolated vertices are dropped and
    the remaining vertices are renumbered in ascending order;
    ``parent_vertices`` maps them back to the input numbering.
    """
    keep = _cyclic_edges(g)
    if not keep.all():
        logger.info(f"Removed {int((~keep).sum())} dangling edges")
    return g.compacted(keep)


def dangling_edges(g: LinearGraph) -> CellArray:
    """Edges that ``biconnected_filter`` removes, in the input numbering."""
    keep = _cyclic_edges(g)
    return CellArray(1, tuple(e for e, k in zip(g.edges.cells, keep) if not k))


def vertex_cycles(g: LinearGraph) -> list[np.ndarray]:
    """
    Incident edges of each vertex sorted counterclockwise by outgoing direction.

    Raises:
        DegenerateGeometryError: If two edges leave a vertex in the same direction
    """
    ev = g.edge_array()
    coords = g.vertices.coords
    direction = coords[ev[:, 1]] - coords[ev[:, 0]]
    forward = np.arctan2(direction[:, 1], direction[:, 0])
    backward = np.arctan2(-direction[:, 1], -direction[:, 0])

    vertex = np.concatenate([ev[:, 0], ev[:, 1]])
    angle = np.concatenate([forward, backward])
    edge = np.concatenate([np.arange(len(ev)), np.arange(len(ev))])
    order = np.lexsort((angle, vertex))
    vertex, angle, edge = vertex[order], angle[order], edge[order]

    bounds = np.searchsorted(vertex, np.arange(g.n_vertices + 1))
    cycles = []
    for v in range(g.n_vertices):
        start, stop = bounds[v], bounds[v + 1]
        angles = angle[start:stop]
        if len(angles) > 1:
            gaps = np.diff(np.append(angles, angles[0] + 2 * np.pi))
            if gaps.min() < ANGLE_TOLERANCE:
                raise DegenerateGeometryError(
                    f"Coincident edge directions at vertex {v}", provenance=v
                )
        cycles.append(edge[start:stop].copy())
    return cycles


def bounded_face_count(g: LinearGraph) -> int:
    """F = E - V + C for a filtered planar graph."""
    n_components, labels = g.components()
    used = np.unique(g.edge_array())
    isolated = g.n_vertices - len(used)
    return g.n_edges - g.n_vertices + (n_components - isolated)
