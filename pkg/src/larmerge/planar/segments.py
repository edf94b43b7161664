"""Segment intersection and fragmentation of a segment soup into a linear graph."""

import logging
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

import numpy as np

from ..chains.cells import CellArray, VertexBuffer, canonicalize
from ..processors import FragmentProcessor
from ..spatial.index import BoxSet, IntervalIndex, build_index
from ..spatial.quotient import quotient_vertices
from .graph import LinearGraph

logger = logging.getLogger(__name__)


class Crossing(NamedTuple):
    """A point shared by two segments: parameter on a, parameter on b, coordinates."""

    t: float
    u: float
    point: tuple[float, float]


@dataclass(frozen=True, eq=False)
class SegmentSoup:
    """Line segments as an n x 2 x 2 array of endpoint pairs."""

    segments: np.ndarray

    def __post_init__(self):
        segments = np.array(self.segments, dtype=np.float64).reshape(-1, 2, 2)
        if not np.all(np.isfinite(segments)):
            raise ValueError("Segment endpoints must be finite")
        object.__setattr__(self, "segments", segments)

    @classmethod
    def from_graph(cls, coords: np.ndarray, edges: Iterable[Iterable[int]]) -> "SegmentSoup":
        coords = np.asarray(coords, dtype=np.float64)
        return cls(np.array([coords[list(e)] for e in edges]).reshape(-1, 2, 2))

    def __len__(self) -> int:
        return self.segments.shape[0]

    def lengths(self) -> np.ndarray:
        return np.linalg.norm(self.segments[:, 1] - self.segments[:, 0], axis=1)

    def boxes(self) -> BoxSet:
        return BoxSet(self.segments.min(axis=1), self.segments.max(axis=1))

    def without_short(self, eps: float) -> "SegmentSoup":
        keep = self.lengths() > eps
        if not keep.all():
            logger.warning(f"Dropped {int((~keep).sum())} segments shorter than {eps:.3g}")
        return SegmentSoup(self.segments[keep])

    def bounding_diagonal(self) -> float:
        if len(self) == 0:
            return 0.0
        pts = self.segments.reshape(-1, 2)
        return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))


def _cross(a: np.ndarray, b: np.ndarray):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def intersect_pair(a, b, eps: float) -> list[Crossing]:
    """
    Points shared by two segments.

    Transversal crossings and endpoint contacts give one point, collinear
    overlaps give the two ends of the shared piece, disjoint or parallel
    segments give none.

    Args:
        a: First segment as ((x1, y1), (x2, y2))
        b: Second segment
        eps: Distance tolerance

    Returns:
        Crossings sorted by the parameter along ``a``
    """
    a0, a1 = (np.asarray(p, dtype=np.float64) for p in a)
    b0, b1 = (np.asarray(p, dtype=np.float64) for p in b)
    r, s = a1 - a0, b1 - b0
    len_a, len_b = float(np.linalg.norm(r)), float(np.linalg.norm(s))
    ta, tb = eps / len_a, eps / len_b

    dist0 = float(_cross(r, b0 - a0)) / len_a
    dist1 = float(_cross(r, b1 - a0)) / len_a

    if abs(dist0) <= eps and abs(dist1) <= eps:
        p0 = float(np.dot(b0 - a0, r)) / len_a**2
        p1 = float(np.dot(b1 - a0, r)) / len_a**2
        lo, hi = max(0.0, min(p0, p1)), min(1.0, max(p0, p1))
        if lo > hi + ta:
            return []
        params = [lo] if hi - lo <= ta else [lo, hi]
        out = []
        for t in params:
            t = min(max(t, 0.0), 1.0)
            point = a0 + t * r
            u = min(max(float(np.dot(point - b0, s)) / len_b**2, 0.0), 1.0)
            out.append(Crossing(t, u, (float(point[0]), float(point[1]))))
        return out

    denom = float(_cross(r, s))
    if abs(denom) <= 1e-15 * len_a * len_b:
        return []
    qp = b0 - a0
    t = float(_cross(qp, s)) / denom
    u = float(_cross(qp, r)) / denom
    if not (-ta <= t <= 1.0 + ta and -tb <= u <= 1.0 + tb):
        return []
    t = _snap(t, ta)
    u = _snap(u, tb)
    point = a0 + t * r
    return [Crossing(t, u, (float(point[0]), float(point[1])))]


def _snap(t: float, tol: float) -> float:
    if t <= tol:
        return 0.0
    if t >= 1.0 - tol:
        return 1.0
    return t


def split_parameters(soup: SegmentSoup, index: IntervalIndex, i: int, eps: float) -> np.ndarray:
    """Sorted, deduplicated parameters at which segment ``i`` must be split."""
    seg = soup.segments[i]
    a0, r = seg[0], seg[1] - seg[0]
    length = float(np.linalg.norm(r))
    tol = eps / length

    candidates = np.fromiter(sorted(index.possible_intersections(i)), dtype=np.int64)
    params = [0.0, 1.0]
    if len(candidates):
        b0 = soup.segments[candidates, 0]
        s = soup.segments[candidates, 1] - b0
        qp = b0 - a0
        dist0 = _cross(r, qp) / length
        dist1 = _cross(r, qp + s) / length
        collinear = (np.abs(dist0) <= eps) & (np.abs(dist1) <= eps)
        denom = _cross(r, s)
        len_b = np.linalg.norm(s, axis=1)
        transversal = ~collinear & (np.abs(denom) > 1e-15 * length * len_b)

        with np.errstate(divide="ignore", invalid="ignore"):
            t = _cross(qp, s) / denom
            u = _cross(qp, r) / denom
        tol_b = eps / len_b
        hit = transversal & (t >= -tol) & (t <= 1.0 + tol) & (u >= -tol_b) & (u <= 1.0 + tol_b)
        params.extend(t[hit].tolist())

        for j in candidates[collinear]:
            params.extend(c.t for c in intersect_pair(seg, soup.segments[j], eps))

    params = np.clip(np.asarray(params), 0.0, 1.0)
    params[params <= tol] = 0.0
    params[params >= 1.0 - tol] = 1.0
    params = np.unique(params)
    keep = np.concatenate([[True], np.diff(params) > tol])
    params = params[keep]
    if params[-1] != 1.0:
        params[-1] = 1.0
    return params


def fragment(
    soup: SegmentSoup,
    index: Optional[IntervalIndex],
    eps: float,
    jobs: Optional[int] = 1,
    deterministic: bool = True,
) -> LinearGraph:
    """
    Split every segment at its intersections and weld the pieces into a graph.

    Args:
        soup: Input segments (longer than ``eps``)
        index: Interval index over the segment boxes (built if None)
        eps: Absolute distance tolerance
        jobs: Worker threads for the per-segment splitting
        deterministic: Keep input order when collecting parallel results

    Returns:
        Canonical linear graph without zero-length or duplicate edges
    """
    if index is None:
        index = build_index(soup.boxes().padded(eps))

    processor = FragmentProcessor(jobs=jobs, deterministic=deterministic)
    results = processor.map(lambda i: split_parameters(soup, index, i, eps), range(len(soup)))

    raw_points = []
    for i, params in results:
        seg = soup.segments[i]
        pts = seg[0] + params[:, None] * (seg[1] - seg[0])
        pts[0], pts[-1] = seg[0], seg[1]
        raw_points.append(np.repeat(pts, 2, axis=0)[1:-1])

    if not raw_points:
        return LinearGraph(VertexBuffer(np.zeros((0, 2))), CellArray(1))

    raw = VertexBuffer(np.concatenate(raw_points))
    quotient = quotient_vertices(raw, eps)
    pairs = quotient.representative.reshape(-1, 2)
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]

    edges, _ = canonicalize(CellArray(1, tuple(map(tuple, pairs.tolist()))), quotient.merged.n)
    graph = LinearGraph(quotient.merged, edges).compacted()
    logger.info(
        f"Fragmented {len(soup)} segments into {len(graph.edges)} edges "
        f"and {graph.vertices.n} vertices"
    )
    return graph
