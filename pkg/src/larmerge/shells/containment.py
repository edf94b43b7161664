"""Ray casting against shells and the containment forest of components."""

import logging
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

import networkx as nx
import numpy as np

from ..chains.complex import Skeleton
from ..chains.geometry import plane_frame, point_in_polygon, segment_distances
from ..errors import DegenerateGeometryError, InconsistentContainmentError
from .components import ComponentSet

logger = logging.getLogger(__name__)

MAX_RAY_ATTEMPTS = 8
GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def ray_directions(dim: int, count: int = MAX_RAY_ATTEMPTS) -> Iterator[np.ndarray]:
    """
    Deterministic sequence of unit ray directions, starting with +x.

    Later directions rotate by irrational angle increments so that a
    degenerate configuration is not met twice.
    """
    for k in range(count):
        a = k * GOLDEN_ANGLE
        if dim == 2:
            yield np.array([np.cos(a), np.sin(a)])
        else:
            b = k * np.sqrt(2.0) * np.pi
            yield np.array([np.cos(a), np.sin(a) * np.cos(b), np.sin(a) * np.sin(b)])


def _planar_hits(point, direction, skeleton: Skeleton, facets: np.ndarray, tol: float):
    tails, heads = skeleton.edge_points
    a, b = tails[facets], heads[facets]
    seg = b - a
    w = a - point
    denom = direction[0] * seg[:, 1] - direction[1] * seg[:, 0]
    lengths = np.linalg.norm(seg, axis=1)
    s_num = w[:, 0] * seg[:, 1] - w[:, 1] * seg[:, 0]
    t_num = w[:, 0] * direction[1] - w[:, 1] * direction[0]

    parallel = np.abs(denom) <= 1e-14 * lengths
    # ray running along the supporting line of an edge
    if np.any(parallel & (np.abs(s_num) <= tol * lengths)):
        return None

    safe = np.where(parallel, 1.0, denom)
    s = np.where(parallel, -np.inf, s_num / safe)
    along = np.where(parallel, -np.inf, t_num / safe * lengths)
    ahead = s > -tol
    touching = ahead & ((np.abs(along) <= tol) | (np.abs(along - lengths) <= tol))
    if np.any(touching) or np.any(ahead & (s <= tol) & (along > 0) & (along < lengths)):
        return None
    hit = ahead & (along > tol) & (along < lengths - tol)
    return [(float(s[k]), int(facets[k])) for k in np.flatnonzero(hit)]


def _spatial_hits(point, direction, skeleton: Skeleton, facets: np.ndarray, tol: float):
    tails, heads = skeleton.edge_points
    areas = skeleton.facet_areas
    anchors = skeleton.facet_anchor
    columns = skeleton.facet_edge_columns

    hits = []
    for f in facets.tolist():
        normal = areas[f] / np.linalg.norm(areas[f])
        denom = float(normal @ direction)
        dist = float(normal @ (anchors[f] - point))
        if abs(denom) <= 1e-12:
            if abs(dist) <= tol:
                return None
            continue
        s = dist / denom
        if s < -tol:
            continue
        q = point + s * direction
        e1, e2, _ = plane_frame(normal)
        edges = np.fromiter(columns[f].keys(), dtype=np.int64)
        frame = np.vstack([e1, e2]).T
        t2, h2, q2 = tails[edges] @ frame, heads[edges] @ frame, q @ frame
        if segment_distances(q2, t2, h2).min() <= tol:
            return None
        if not point_in_polygon(q2, t2, h2):
            continue
        if s <= tol:
            return None
        hits.append((s, f))
    return hits


def ray_hits(
    point: np.ndarray,
    direction: np.ndarray,
    skeleton: Skeleton,
    facets,
    tol: float,
) -> Optional[list[tuple[float, int]]]:
    """
    Facets crossed by the half-line ``point + s * direction`` (s > 0).

    Returns:
        (s, facet) pairs in no particular order, or None when the ray grazes
        a hinge, runs inside a facet, or starts on one
    """
    facets = np.asarray(list(facets), dtype=np.int64)
    if len(facets) == 0:
        return []
    if skeleton.dim == 2:
        return _planar_hits(point, direction, skeleton, facets, tol)
    return _spatial_hits(point, direction, skeleton, facets, tol)


def cast(point: np.ndarray, skeleton: Skeleton, facets, tol: float):
    """
    Shoot rays from ``point`` until one meets the facets transversally.

    Raises:
        DegenerateGeometryError: If every ray of the sequence is degenerate
    """
    for attempt, direction in enumerate(ray_directions(skeleton.dim)):
        hits = ray_hits(point, direction, skeleton, facets, tol)
        if hits is not None:
            if attempt:
                logger.warning(f"Ray from {point.tolist()} perturbed {attempt} time(s)")
            return direction, hits
    raise DegenerateGeometryError(
        f"No transversal ray from {point.tolist()} after {MAX_RAY_ATTEMPTS} attempts"
    )


def point_in_shell(
    point: np.ndarray, shell: Mapping[int, int], skeleton: Skeleton, tol: float
) -> bool:
    """Crossing-parity test of a point against a closed facet cycle."""
    _, hits = cast(np.asarray(point, dtype=np.float64), skeleton, shell.keys(), tol)
    return len(hits) % 2 == 1


@dataclass(frozen=True, eq=False)
class ContainmentTree:
    """
    Containment among the shells of the components.

    ``containment[i, j]`` is True when shell i lies inside shell j, ``arcs``
    holds the pairs (i, j) of the transitive reduction (j directly contains i)
    and ``depth[i]`` counts the shells enclosing shell i.
    """

    containment: np.ndarray
    reduced: np.ndarray
    arcs: tuple[tuple[int, int], ...]
    depth: np.ndarray

    @property
    def roots(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.depth == 0)]

    def parent(self, i: int) -> Optional[int]:
        for a, b in self.arcs:
            if a == i:
                return b
        return None


def shell_sample_point(shell: Mapping[int, int], skeleton: Skeleton) -> np.ndarray:
    """First vertex of the lowest facet of a shell."""
    f = min(shell)
    return skeleton.vertices.coords[skeleton.facets[f][0]]


def _bounds(shell: Mapping[int, int], skeleton: Skeleton) -> tuple[np.ndarray, np.ndarray]:
    vertices = sorted({v for f in shell for v in skeleton.facets[f]})
    coords = skeleton.vertices.coords[vertices]
    return coords.min(axis=0), coords.max(axis=0)


def containment(
    components: ComponentSet, shells: list[Mapping[int, int]], tol: float
) -> ContainmentTree:
    """
    Containment relation of the shells and its transitive reduction.

    Shells are given in the local facet numbering of their components.

    Raises:
        InconsistentContainmentError: If two shells contain each other
        DegenerateGeometryError: If no transversal ray can be found
    """
    h = len(shells)
    points = [shell_sample_point(s, c.skeleton) for s, c in zip(shells, components)]
    bounds = [_bounds(s, c.skeleton) for s, c in zip(shells, components)]

    relation = np.zeros((h, h), dtype=bool)
    for i in range(h):
        for j in range(h):
            if i == j:
                continue
            lo, hi = bounds[j]
            if np.any(points[i] < lo) or np.any(points[i] > hi):
                continue
            relation[i, j] = point_in_shell(points[i], shells[j], components[j].skeleton, tol)

    if np.any(relation & relation.T):
        i, j = map(int, np.argwhere(relation & relation.T)[0])
        raise InconsistentContainmentError(
            f"Shells {i} and {j} contain each other", provenance=[i, j]
        )

    graph = nx.DiGraph()
    graph.add_nodes_from(range(h))
    graph.add_edges_from((int(i), int(j)) for i, j in np.argwhere(relation))
    if not nx.is_directed_acyclic_graph(graph):
        raise InconsistentContainmentError("Shell containment has a cycle")
    reduction = nx.transitive_reduction(graph)
    arcs = tuple(sorted((int(i), int(j)) for i, j in reduction.edges()))

    reduced = np.zeros((h, h), dtype=bool)
    for i, j in arcs:
        reduced[i, j] = True
    depth = relation.sum(axis=1).astype(np.int64)
    logger.info(f"Containment among {h} shells: {len(arcs)} direct arcs")
    return ContainmentTree(relation, reduced, arcs, depth)
