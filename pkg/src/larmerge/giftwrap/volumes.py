"""Signed measures of cell cycles and identification of the exterior cell."""

import logging
from typing import Mapping, Union

import numpy as np

from ..chains.complex import Skeleton
from ..chains.operators import Chain
from ..errors import NotACycleError
from .extraction import BoundaryPlus

logger = logging.getLogger(__name__)


def _entries(cycle: Union[Chain, Mapping[int, int]]) -> Mapping[int, int]:
    return cycle.entries if isinstance(cycle, Chain) else cycle


def signed_volume(cycle: Union[Chain, Mapping[int, int]], skeleton: Skeleton) -> float:
    """
    Oriented area (2D) or volume (3D) enclosed by a closed facet cycle.

    2D uses the shoelace sum over oriented edges; 3D sums, for every face,
    a third of the dot product of a face vertex with the face's oriented
    vector area (the signed tetrahedra of a fan triangulation).

    Raises:
        NotACycleError: If the chain has a boundary
    """
    entries = _entries(cycle)
    facets = np.fromiter(entries.keys(), dtype=np.int64, count=len(entries))
    coeffs = np.fromiter(entries.values(), dtype=np.float64, count=len(entries))

    x = np.zeros(skeleton.n_facets, dtype=np.int64)
    x[facets] = coeffs.astype(np.int64)
    if np.any(skeleton.facet_boundary.matrix.astype(np.int64) @ x):
        raise NotACycleError("Chain is not closed")

    if skeleton.dim == 2:
        tails, heads = skeleton.edge_points
        cross = tails[facets, 0] * heads[facets, 1] - tails[facets, 1] * heads[facets, 0]
        return 0.5 * float(np.dot(coeffs, cross))

    areas = skeleton.facet_areas[facets]
    anchors = skeleton.facet_anchor[facets]
    return float(np.dot(coeffs, np.einsum("ij,ij->i", anchors, areas))) / 3.0


def _extremal_vertices(skeleton: Skeleton, used: np.ndarray) -> set[int]:
    coords = skeleton.vertices.coords[used]
    extremal = set()
    for axis in range(coords.shape[1]):
        extremal.add(int(used[np.argmin(coords[:, axis])]))
        extremal.add(int(used[np.argmax(coords[:, axis])]))
    return extremal


def identify_exterior(boundary: BoundaryPlus, skeleton: Skeleton) -> int:
    """
    Column of the unbounded cell of one connected component.

    The exterior is incident to every coordinate-extremal vertex, so the
    columns touching all of them are candidates; when more than one
    remains, the largest absolute signed volume decides and ties go to the
    negatively oriented column.
    """
    columns = boundary.columns()
    facet_vertices = skeleton.facets.cells
    vertex_columns: dict[int, set[int]] = {}
    for j, column in enumerate(columns):
        for f in column:
            for v in facet_vertices[f]:
                vertex_columns.setdefault(v, set()).add(j)

    used = np.array(sorted(vertex_columns), dtype=np.int64)
    candidates = set(range(len(columns)))
    for v in _extremal_vertices(skeleton, used):
        candidates &= vertex_columns[v]
    if len(candidates) == 1:
        return candidates.pop()

    pool = sorted(candidates) or list(range(len(columns)))
    volumes = np.array([signed_volume(columns[j], skeleton) for j in pool])
    scale = max(float(np.abs(volumes).max()), 1e-300)
    ties = [j for j, v in zip(pool, volumes) if abs(abs(v) - scale) <= 1e-9 * scale]
    negative = [j for j in ties if signed_volume(columns[j], skeleton) < 0]
    chosen = (negative or ties)[0]
    logger.debug(f"Exterior cell chosen by volume among {len(pool)} candidates: {chosen}")
    return chosen


def orient_positive(boundary: BoundaryPlus, skeleton: Skeleton) -> BoundaryPlus:
    """Identify the exterior and flip all columns so bounded cells have positive volume."""
    exterior = identify_exterior(boundary, skeleton)
    oriented = BoundaryPlus(boundary.operator, exterior)
    if signed_volume(boundary.operator.column(exterior), skeleton) > 0:
        oriented = oriented.flipped()
    return oriented
