"""Connected components of a (d-1)-skeleton, with reindexed local views."""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from ..chains.cells import CellArray, VertexBuffer
from ..chains.complex import Skeleton
from ..chains.operators import SignedOperator

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Component:
    """One connected component: global index subsets and a local skeleton."""

    facets: np.ndarray
    vertices: np.ndarray
    edges: np.ndarray
    skeleton: Skeleton

    @property
    def n_facets(self) -> int:
        return len(self.facets)


@dataclass(frozen=True, eq=False)
class ComponentSet:
    components: tuple[Component, ...]
    skeleton: Skeleton

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, p: int) -> Component:
        return self.components[p]


def facet_components(facets: CellArray, n_vertices: int) -> list[np.ndarray]:
    """
    Facet index groups of the connected components of the facet-vertex graph.

    Components are ordered by their lowest facet index.
    """
    if len(facets) == 0:
        return []
    m = facets.characteristic_matrix(n_vertices)
    n_f = m.shape[0]
    graph = sp.bmat([[None, m], [m.T, None]], format="csr")
    _, labels = connected_components(graph, directed=False)
    facet_labels = labels[:n_f]
    groups: dict[int, list[int]] = {}
    for f, label in enumerate(facet_labels.tolist()):
        groups.setdefault(label, []).append(f)
    return [np.asarray(g, dtype=np.int64) for g in sorted(groups.values(), key=lambda g: g[0])]


def _local_skeleton(skeleton: Skeleton, facets: np.ndarray):
    if skeleton.dim == 2:
        edges = facets
    else:
        touched = skeleton.boundary2.matrix[:, facets].tocoo().row
        edges = np.unique(touched)

    ev = np.array([skeleton.edges[e] for e in edges], dtype=np.int64).reshape(-1, 2)
    vertices = np.unique(ev)
    remap = np.full(skeleton.vertices.n, -1, dtype=np.int64)
    remap[vertices] = np.arange(len(vertices))
    coords = VertexBuffer(skeleton.vertices.coords[vertices])
    local_edges = CellArray(1, tuple(map(tuple, np.sort(remap[ev], axis=1).tolist())))

    if skeleton.dim == 2:
        return Skeleton.planar(coords, local_edges), vertices, edges

    faces = CellArray(
        2, tuple(tuple(sorted(remap[list(skeleton.faces[f])].tolist())) for f in facets)
    )
    sub = skeleton.boundary2.matrix[edges][:, facets]
    local_boundary = SignedOperator(sub, 1, 2)
    return Skeleton.spatial(coords, local_edges, faces, local_boundary), vertices, edges


def split_components(skeleton: Skeleton) -> ComponentSet:
    """Split a skeleton into connected components with local skeletons."""
    groups = facet_components(skeleton.facets, skeleton.vertices.n)
    components = []
    for facets in groups:
        local, vertices, edges = _local_skeleton(skeleton, facets)
        components.append(Component(facets, vertices, edges, local))
    logger.info(f"Found {len(components)} connected components")
    return ComponentSet(tuple(components), skeleton)
