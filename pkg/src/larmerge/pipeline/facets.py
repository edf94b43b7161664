"""Subdivision of single faces by the faces that cross them."""

import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..chains.cells import CellArray, VertexBuffer
from ..chains.complex import Skeleton
from ..chains.geometry import point_in_polygon
from ..chains.operators import SignedOperator
from ..chains.polygons import interior_point, signed_loops
from ..planar.graph import biconnected_filter
from ..planar.segments import SegmentSoup, fragment
from ..shells.assembly import arrange_skeleton
from .section import plane_section
from .submanifold import SubmanifoldMap, submanifold_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FacetFragment:
    """A face cut into 2-cells, back in world coordinates."""

    facet: int
    vertices: VertexBuffer
    edges: CellArray
    faces: CellArray
    boundary2: SignedOperator

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @classmethod
    def empty(cls, facet: int) -> "FacetFragment":
        return cls(
            facet,
            VertexBuffer(np.zeros((0, 3))),
            CellArray(1),
            CellArray(2),
            SignedOperator.from_columns([], 0, 1, 2),
        )


def _mapped_edges(skeleton: Skeleton, facet: int, mapping: SubmanifoldMap):
    tails, heads = skeleton.edge_points
    edges = np.fromiter(skeleton.facet_edge_columns[facet].keys(), dtype=np.int64)
    return mapping.apply(tails[edges]), mapping.apply(heads[edges])


def section_soup(
    skeleton: Skeleton, facet: int, candidates: Iterable[int], mapping: SubmanifoldMap, eps: float
) -> SegmentSoup:
    """The face's own edges plus the traces of the candidate faces on its plane."""
    own_t, own_h = _mapped_edges(skeleton, facet, mapping)
    pieces = [np.stack([own_t[:, :2], own_h[:, :2]], axis=1)]
    for tau in sorted(candidates):
        t, h = _mapped_edges(skeleton, tau, mapping)
        z = np.concatenate([t[:, 2], h[:, 2]])
        if z.min() > eps or z.max() < -eps:
            continue
        normal = mapping.rotation @ skeleton.facet_areas[tau]
        pieces.append(plane_section(t, h, normal, eps))
    return SegmentSoup(np.concatenate(pieces))


def subdivide_facet(
    skeleton: Skeleton, facet: int, candidates: Iterable[int], eps: float
) -> FacetFragment:
    """
    Cut one face of a 3D skeleton by the faces that may intersect it.

    The face and its candidates are moved onto x3 = 0, the face's edges and
    the candidates' sections are arranged in the plane, and the 2-cells whose
    interior sample point lies inside the face are mapped back.

    Raises:
        DegenerateFacetError: If the face is degenerate
        InconsistentFacetError: If a candidate's boundary is not closed
    """
    mapping = submanifold_map(skeleton, facet)
    own_t, own_h = _mapped_edges(skeleton, facet, mapping)
    soup = section_soup(skeleton, facet, candidates, mapping, eps).without_short(eps)

    graph = biconnected_filter(fragment(soup, None, eps))
    if graph.n_edges == 0:
        logger.warning(f"Face {facet} vanished during subdivision")
        return FacetFragment.empty(facet)

    local = Skeleton.planar(graph.vertices, graph.edges)
    assembly = arrange_skeleton(local, eps)
    points = graph.vertices.coords

    kept = []
    for k in range(assembly.n_cells):
        column = assembly.boundary.column(k)
        sample = interior_point(points, signed_loops(column, graph.edges))
        if point_in_polygon(sample, own_t[:, :2], own_h[:, :2]):
            kept.append(column)

    used_edges = np.array(sorted({e for column in kept for e in column}), dtype=np.int64)
    ev = np.array([graph.edges[e] for e in used_edges], dtype=np.int64).reshape(-1, 2)
    used_vertices = np.unique(ev)
    vertex_map = np.full(graph.n_vertices, -1, dtype=np.int64)
    vertex_map[used_vertices] = np.arange(len(used_vertices))
    edge_map = {int(e): k for k, e in enumerate(used_edges)}

    edges = CellArray(1, tuple(map(tuple, vertex_map[ev].tolist())))
    faces = CellArray(
        2,
        tuple(
            tuple(sorted({int(vertex_map[v]) for e in column for v in graph.edges[e]}))
            for column in kept
        ),
    )
    boundary2 = SignedOperator.from_columns(
        [{edge_map[e]: s for e, s in column.items()} for column in kept], len(edges), 1, 2
    )
    coords = mapping.invert(points[used_vertices])
    logger.debug(f"Face {facet}: {len(kept)} of {assembly.n_cells} cells kept")
    return FacetFragment(facet, VertexBuffer(coords.reshape(-1, 3)), edges, faces, boundary2)
