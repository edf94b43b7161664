"""Loops of signed edge cycles and their triangulation."""

import logging
from typing import Mapping

import mapbox_earcut as earcut
import numpy as np

from ..errors import NotACycleError
from .cells import CellArray
from .complex import Skeleton
from .geometry import plane_frame, shoelace

logger = logging.getLogger(__name__)


def signed_loops(column: Mapping[int, int], edges: CellArray) -> list[list[int]]:
    """
    Closed vertex loops traversed along the orientation of a signed 1-cycle.

    Edges are oriented from low to high vertex index, so a coefficient of -1
    walks an edge backwards.

    Raises:
        NotACycleError: If some vertex has no outgoing edge left
    """
    outgoing: dict[int, list[int]] = {}
    for e, s in sorted(column.items()):
        a, b = edges[e]
        tail, head = (a, b) if s > 0 else (b, a)
        outgoing.setdefault(tail, []).append(head)

    loops = []
    while outgoing:
        start = min(outgoing)
        current = start
        loop = []
        while True:
            heads = outgoing.get(current)
            if not heads:
                raise NotACycleError(f"Edge cycle breaks at vertex {current}")
            head = heads.pop(0)
            if not heads:
                del outgoing[current]
            loop.append(current)
            current = head
            if current == start:
                break
        loops.append(loop)
    return loops


def _doubled_areas(points: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    a, b, c = (points[triangles[:, k]] for k in range(3))
    return (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])


def triangulate(points: np.ndarray, loops: list[list[int]]) -> np.ndarray:
    """
    Triangles (vertex id triples) covering a polygon with holes.

    ``points`` holds 2D coordinates indexed by vertex id. The loop of largest
    area is taken as the outer ring. Triangles are returned counterclockwise.
    """
    if not loops:
        return np.zeros((0, 3), dtype=np.int64)
    areas = [abs(shoelace(points[loop])) for loop in loops]
    ordered = [loops[k] for k in np.argsort(areas, kind="stable")[::-1]]
    ids = np.concatenate([np.asarray(loop, dtype=np.int64) for loop in ordered])
    rings = np.cumsum([len(loop) for loop in ordered]).astype(np.uint32)
    flat = earcut.triangulate_float64(np.ascontiguousarray(points[ids], dtype=np.float64), rings)
    triangles = ids[np.asarray(flat, dtype=np.int64).reshape(-1, 3)]
    if len(triangles):
        clockwise = _doubled_areas(points, triangles) < 0
        triangles[clockwise] = triangles[clockwise][:, ::-1]
    return triangles


def interior_point(points: np.ndarray, loops: list[list[int]]) -> np.ndarray:
    """Centroid of the largest triangle of a polygon's triangulation."""
    triangles = triangulate(points, loops)
    if len(triangles) == 0:
        logger.debug("Empty triangulation, falling back to the vertex mean")
        return points[loops[0]].mean(axis=0)
    k = int(np.argmax(np.abs(_doubled_areas(points, triangles))))
    return points[triangles[k]].mean(axis=0)


def face_triangles(skeleton: Skeleton, face: int) -> np.ndarray:
    """
    Triangulation of one face of a 3D skeleton as vertex id triples.

    Triangles follow the face's orientation (its column in d_2).
    """
    loops = signed_loops(skeleton.facet_edge_columns[face], skeleton.edges)
    ids = sorted({v for loop in loops for v in loop})
    local = {v: k for k, v in enumerate(ids)}
    frame = plane_frame(skeleton.facet_areas[face])
    points = skeleton.vertices.coords[ids] @ frame[:2].T
    triangles = triangulate(points, [[local[v] for v in loop] for loop in loops])
    return np.asarray(ids, dtype=np.int64)[triangles]
