"""Cyclic orderings of facets around hinges (vertices in 2D, edges in 3D)."""

import logging

import numpy as np

from ..chains.complex import Skeleton
from ..chains.geometry import plane_frame
from ..errors import DanglingFacetError, DegenerateGeometryError
from ..planar.graph import ANGLE_TOLERANCE, LinearGraph, vertex_cycles

logger = logging.getLogger(__name__)


class HingeOrdering:
    """Next/Prev permutations of the facets incident to each hinge."""

    def __init__(self, cycles: list[np.ndarray]):
        self.cycles = [np.asarray(c, dtype=np.int64) for c in cycles]
        self._position = [{int(f): k for k, f in enumerate(c)} for c in self.cycles]

    def __len__(self) -> int:
        return len(self.cycles)

    def cycle(self, hinge: int) -> np.ndarray:
        return self.cycles[hinge]

    def _step(self, hinge: int, facet: int, offset: int) -> int:
        cycle = self.cycles[hinge]
        if len(cycle) < 2:
            raise DanglingFacetError(
                f"Hinge {hinge} has a single incident facet {facet}", provenance=hinge
            )
        k = self._position[hinge][facet]
        return int(cycle[(k + offset) % len(cycle)])

    def next(self, hinge: int, facet: int) -> int:
        return self._step(hinge, facet, 1)

    def prev(self, hinge: int, facet: int) -> int:
        return self._step(hinge, facet, -1)


def _spatial_cycles(skeleton: Skeleton) -> list[np.ndarray]:
    coords = skeleton.vertices.coords
    ev = np.array(skeleton.edges.cells, dtype=np.int64).reshape(-1, 2)
    ev.sort(axis=1)
    areas = skeleton.facet_areas
    rows = skeleton.boundary2.matrix.tocsr()
    rows.sort_indices()

    cycles = []
    for tau in range(rows.shape[0]):
        start, stop = rows.indptr[tau], rows.indptr[tau + 1]
        faces = rows.indices[start:stop]
        signs = rows.data[start:stop].astype(np.float64)
        if len(faces) < 2:
            cycles.append(faces.copy())
            continue

        axis = coords[ev[tau, 1]] - coords[ev[tau, 0]]
        e1, e2, u = plane_frame(axis)
        # in-plane direction pointing into each face, away from the hinge
        inward = np.cross(areas[faces], signs[:, None] * u)
        angles = np.arctan2(inward @ e2, inward @ e1)
        order = np.argsort(angles, kind="stable")
        sorted_angles = angles[order]
        gaps = np.diff(np.append(sorted_angles, sorted_angles[0] + 2 * np.pi))
        if gaps.min() < ANGLE_TOLERANCE:
            raise DegenerateGeometryError(
                f"Faces {faces.tolist()} share a tangent plane at edge {tau}", provenance=tau
            )
        cycles.append(faces[order])
    return cycles


def build_hinge_ordering(skeleton: Skeleton) -> HingeOrdering:
    """
    Angular order of the facets around every hinge of a skeleton.

    In 2D this is the counterclockwise order of edges around each vertex.
    In 3D the faces around an edge are sorted counterclockwise about the
    edge direction (low to high vertex index) by the direction that points
    from the edge into each face.

    Raises:
        DegenerateGeometryError: If two facets leave a hinge in the same direction
    """
    if skeleton.dim == 2:
        graph = LinearGraph(skeleton.vertices, skeleton.edges)
        return HingeOrdering(vertex_cycles(graph))
    return HingeOrdering(_spatial_cycles(skeleton))
