"""Merging collections of complexes into their regularized arrangement."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from ..chains.cells import CellArray, VertexBuffer, canonicalize, point_cells
from ..chains.complex import ChainComplex, Skeleton
from ..chains.geometry import plane_frame
from ..chains.operators import Chain, SignedOperator, boundary1, boundary2
from ..config import RunConfig
from ..errors import DimensionMismatchError, EmptyInputError
from ..giftwrap.volumes import signed_volume
from ..planar.graph import biconnected_filter, dangling_edges
from ..planar.segments import SegmentSoup, fragment
from ..processors import FragmentProcessor
from ..shells.assembly import Assembly, arrange_skeleton, locate
from ..shells.containment import ContainmentTree
from ..spatial.index import BoxSet, build_index
from ..spatial.quotient import quotient_vertices
from .facets import FacetFragment, subdivide_facet

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Arrangement(ChainComplex):
    """
    The regularized arrangement of a collection of complexes.

    Besides the chain complex it keeps the exterior shells of the connected
    components, their containment tree and the facets removed while
    regularizing (as coordinate arrays).
    """

    shells: tuple[Chain, ...] = ()
    tree: Optional[ContainmentTree] = None
    dangling: tuple[np.ndarray, ...] = ()
    tolerance: float = 0.0

    @property
    def n_cells(self) -> int:
        return len(self.skeletons[-1])

    @cached_property
    def skeleton(self) -> Skeleton:
        """The (d-1)-skeleton with geometry."""
        if self.dim == 3:
            return Skeleton(
                self.vertices,
                self.skeletons[1],
                self.operators[0],
                self.skeletons[2],
                self.operators[1],
            )
        return Skeleton(self.vertices, self.skeletons[1], self.operators[0])

    def exterior(self) -> Chain:
        """Boundary of the unbounded cell: the shells of the outermost components."""
        entries: dict[int, int] = {}
        roots = self.tree.roots if self.tree is not None else range(len(self.shells))
        for i in roots:
            entries.update(self.shells[i].entries)
        return Chain(self.dim - 1, len(self.skeletons[-2]), entries)

    def boundary_plus(self) -> SignedOperator:
        """d_d with the exterior cell appended as its last column."""
        top = self.boundary(self.dim)
        columns = top.columns() + [self.exterior().entries]
        return SignedOperator.from_columns(columns, top.shape[0], self.dim - 1, self.dim)

    def cell_volumes(self) -> np.ndarray:
        """Signed area (2D) or volume (3D) of every bounded cell."""
        top = self.boundary(self.dim)
        return np.array([signed_volume(top.column(k), self.skeleton) for k in range(self.n_cells)])

    def locate_point(self, point) -> Optional[int]:
        return locate_point(self, point)


def locate_point(arrangement: Arrangement, point) -> Optional[int]:
    """
    Bounded cell containing ``point``, or None for the exterior.

    Raises:
        DegenerateGeometryError: If the point lies on the (d-1)-skeleton
    """
    if arrangement.n_cells == 0:
        return None
    return locate(
        np.asarray(point, dtype=np.float64),
        arrangement.boundary(arrangement.dim),
        arrangement.skeleton,
        arrangement.tolerance or 1e-12,
    )


def _from_assembly(
    skeleton: Skeleton, assembly: Assembly, tol: float, dangling: tuple
) -> Arrangement:
    skeletons = [point_cells(skeleton.vertices.n), skeleton.edges]
    operators = [skeleton.boundary1]
    if skeleton.dim == 3:
        skeletons.append(skeleton.faces)
        operators.append(skeleton.boundary2)
    skeletons.append(assembly.cells)
    operators.append(assembly.boundary)
    return Arrangement(
        skeleton.vertices,
        tuple(skeletons),
        tuple(operators),
        shells=assembly.shells,
        tree=assembly.tree,
        dangling=dangling,
        tolerance=tol,
    )


def _empty_arrangement(dim: int, tol: float, dangling: tuple) -> Arrangement:
    vertices = VertexBuffer(np.zeros((0, dim)))
    skeletons = tuple(CellArray(p) for p in range(dim + 1))
    operators = tuple(SignedOperator.from_columns([], 0, p - 1, p) for p in range(1, dim + 1))
    return Arrangement(vertices, skeletons, operators, dangling=dangling, tolerance=tol)


def arrange_segments(segments, config: Optional[RunConfig] = None) -> Arrangement:
    """
    Regularized arrangement of the plane induced by a set of segments.

    Args:
        segments: n x 2 x 2 array of endpoint pairs
        config: Run configuration (tolerance, workers, assembly mode)

    Raises:
        EmptyInputError: If no segment is longer than the tolerance
    """
    config = config or RunConfig()
    soup = SegmentSoup(segments)
    eps = config.absolute_epsilon(soup.segments.reshape(-1, 2))
    soup = soup.without_short(eps)
    if len(soup) == 0:
        raise EmptyInputError("No segments to arrange")

    graph = fragment(soup, None, eps, jobs=config.jobs, deterministic=config.deterministic)
    coords = graph.vertices.coords
    dangling = tuple(coords[list(e)] for e in dangling_edges(graph))
    filtered = biconnected_filter(graph)
    if filtered.n_edges == 0:
        logger.warning("Segments bound no 2-cell")
        return _empty_arrangement(2, eps, dangling)

    skeleton = Skeleton.planar(filtered.vertices, filtered.edges)
    assembly = arrange_skeleton(
        skeleton, eps, config.parity, jobs=config.jobs, deterministic=config.deterministic
    )
    logger.info(f"Arranged {len(soup)} segments into {assembly.n_cells} 2-cells")
    return _from_assembly(skeleton, assembly, eps, dangling)


def derive_edges(vertices: VertexBuffer, faces: CellArray) -> CellArray:
    """
    Edges of faces given only by their vertex sets.

    Each face's vertices are ordered by angle around their centroid in the
    face plane, so faces are assumed convex. Triangles need no geometry.
    """
    coords = vertices.coords
    pairs = []
    for face in faces:
        face = list(face)
        if len(face) > 3:
            pts = coords[face]
            centred = pts - pts.mean(axis=0)
            if coords.shape[1] == 3:
                normal = np.linalg.svd(centred)[2][-1]
                centred = centred @ plane_frame(normal)[:2].T
            order = np.argsort(np.arctan2(centred[:, 1], centred[:, 0]), kind="stable")
            face = [face[k] for k in order]
        pairs.extend(zip(face, face[1:] + face[:1]))
    edges, _ = canonicalize(CellArray(1, tuple(pairs)), vertices.n)
    return edges


def _union_skeleton(complexes: Sequence[ChainComplex]) -> Skeleton:
    coords, edges, faces, columns = [], [], [], []
    v_offset = e_offset = 0
    for c in complexes:
        if c.dim < 2:
            raise DimensionMismatchError("3D merge needs complexes with 2-cells")
        coords.append(c.vertices.coords)
        edges.extend(tuple(v + v_offset for v in e) for e in c.skeletons[1])
        faces.extend(tuple(v + v_offset for v in f) for f in c.skeletons[2])
        columns.extend({e + e_offset: s for e, s in col.items()} for col in c.boundary(2).columns())
        v_offset += c.vertices.n
        e_offset += len(c.skeletons[1])
    vertices = VertexBuffer(np.concatenate(coords))
    operator = SignedOperator.from_columns(columns, e_offset, 1, 2)
    return Skeleton.spatial(
        vertices, CellArray(1, tuple(edges)), CellArray(2, tuple(faces)), operator
    )


def _normalised(column: dict[int, int]) -> dict[int, int]:
    if column[min(column)] < 0:
        return {e: -s for e, s in column.items()}
    return column


def weld_fragments(fragments: Sequence[FacetFragment], eps: float) -> Skeleton:
    """
    Identify coincident vertices, edges and faces across fragments.

    Vertices are welded with a kd-tree, then edges and faces are identified
    by their canonical vertex lists. A face keeps the boundary of its first
    occurrence, normalised so its lowest edge has coefficient +1.
    """
    fragments = [f for f in fragments if f.n_faces]
    if not fragments:
        raise EmptyInputError("Subdivision produced no faces")
    raw = VertexBuffer(np.concatenate([f.vertices.coords for f in fragments]))
    quotient = quotient_vertices(raw, eps)

    edge_ids: dict[tuple[int, int], int] = {}
    face_ids: dict[tuple[int, ...], int] = {}
    face_columns: list[dict[int, int]] = []
    offset = 0
    for fr in fragments:
        rep = quotient.remap(np.arange(offset, offset + fr.vertices.n))
        offset += fr.vertices.n
        local: list[tuple[int, int]] = []
        for a, b in fr.edges:
            ra, rb = int(rep[a]), int(rep[b])
            if ra == rb:
                local.append((-1, 0))
                continue
            key = (min(ra, rb), max(ra, rb))
            local.append((edge_ids.setdefault(key, len(edge_ids)), 1 if ra < rb else -1))

        for k in range(fr.n_faces):
            key = tuple(sorted({int(rep[v]) for v in fr.faces[k]}))
            if key in face_ids:
                continue
            column: dict[int, int] = {}
            for e, s in fr.boundary2.column(k).items():
                g, flip = local[e]
                if g >= 0:
                    column[g] = column.get(g, 0) + s * flip
            column = {e: s for e, s in column.items() if s in (-1, 1)}
            if len(column) < 3:
                continue
            face_ids[key] = len(face_columns)
            face_columns.append(_normalised(column))

    edges = CellArray(1, tuple(edge_ids))
    faces = CellArray(2, tuple(face_ids))
    operator = SignedOperator.from_columns(face_columns, len(edges), 1, 2)
    logger.info(
        f"Welded {len(fragments)} fragments: {quotient.merged.n} vertices, "
        f"{len(edges)} edges, {len(faces)} faces"
    )
    return Skeleton.spatial(quotient.merged, edges, faces, operator)


def prune_dangling_faces(skeleton: Skeleton) -> tuple[Skeleton, tuple[np.ndarray, ...]]:
    """
    Repeatedly drop faces incident to an edge that no other face shares.

    Edges and vertices that no kept face uses are removed as well.

    Returns:
        The compacted skeleton and the coordinates of the dropped faces
    """
    keep = np.ones(skeleton.n_facets, dtype=bool)
    incidence = abs(skeleton.boundary2.matrix).astype(np.int64).tocsc()
    while True:
        degree = np.asarray(incidence[:, np.flatnonzero(keep)].sum(axis=1)).ravel()
        lonely = degree == 1
        if not lonely.any():
            break
        touched = np.asarray(incidence[lonely].sum(axis=0)).ravel() > 0
        keep &= ~touched

    coords = skeleton.vertices.coords
    dropped = tuple(coords[list(skeleton.faces[f])] for f in np.flatnonzero(~keep))
    if dropped:
        logger.warning(f"Dropped {len(dropped)} dangling faces")
    return compact_skeleton(skeleton, np.flatnonzero(keep)), dropped


def compact_skeleton(skeleton: Skeleton, faces: np.ndarray) -> Skeleton:
    """Restrict a 3D skeleton to some faces, dropping unused edges and vertices."""
    sub = skeleton.boundary2.matrix[:, faces]
    used_edges = np.unique(sub.tocoo().row)
    ev = np.array([skeleton.edges[e] for e in used_edges], dtype=np.int64).reshape(-1, 2)
    used_vertices = np.unique(ev)
    remap = np.full(skeleton.vertices.n, -1, dtype=np.int64)
    remap[used_vertices] = np.arange(len(used_vertices))
    edges = CellArray(1, tuple(map(tuple, remap[ev].tolist())))
    cells = CellArray(
        2, tuple(tuple(int(remap[v]) for v in skeleton.faces[f]) for f in faces.tolist())
    )
    operator = SignedOperator(sub[used_edges], 1, 2)
    vertices = VertexBuffer(skeleton.vertices.coords[used_vertices])
    return Skeleton.spatial(vertices, edges, cells, operator)


def _merge_planar(complexes: Sequence[ChainComplex], config: RunConfig) -> Arrangement:
    segments = [
        c.vertices.coords[np.array(c.skeletons[1].cells, dtype=np.int64).reshape(-1, 2)]
        for c in complexes
        if c.dim >= 1
    ]
    return arrange_segments(np.concatenate(segments) if segments else np.zeros((0, 2, 2)), config)


def _merge_spatial(complexes: Sequence[ChainComplex], config: RunConfig) -> Arrangement:
    union = _union_skeleton(complexes)
    eps = config.absolute_epsilon(union.vertices.coords)
    index = build_index(BoxSet.from_cells(union.vertices.coords, union.faces.cells).padded(eps))

    def subdivide(f: int) -> FacetFragment:
        return subdivide_facet(union, f, index.possible_intersections(f), eps)

    processor = FragmentProcessor(jobs=config.jobs, deterministic=config.deterministic)
    fragments: list[Optional[FacetFragment]] = [None] * union.n_facets
    for f, fr in processor.map(subdivide, range(union.n_facets)):
        fragments[f] = fr
    logger.info(f"Subdivided {union.n_facets} faces")

    skeleton, dangling = prune_dangling_faces(weld_fragments(fragments, eps))
    if skeleton.n_facets == 0:
        return _empty_arrangement(3, eps, dangling)
    assembly = arrange_skeleton(
        skeleton, eps, config.parity, jobs=config.jobs, deterministic=config.deterministic
    )
    logger.info(f"Merged {len(complexes)} complexes into {assembly.n_cells} 3-cells")
    return _from_assembly(skeleton, assembly, eps, dangling)


def merge(
    complexes: Sequence[ChainComplex],
    dim: Optional[int] = None,
    config: Optional[RunConfig] = None,
) -> Arrangement:
    """
    Arrangement of the space induced by a collection of complexes.

    In 2D the 1-skeletons are arranged as a segment soup. In 3D every face
    is subdivided by the faces that may cross it, the fragments are welded
    and the 3-cells are extracted by gift wrapping and shell assembly.

    Raises:
        EmptyInputError: If no complex is given
        DimensionMismatchError: If the complexes live in different spaces
    """
    config = config or RunConfig()
    complexes = list(complexes)
    if not complexes:
        raise EmptyInputError("Nothing to merge")
    dims = {c.vertices.dim for c in complexes}
    if len(dims) != 1:
        raise DimensionMismatchError(f"Complexes embedded in different dimensions: {sorted(dims)}")
    d = dim or config.dim or dims.pop()
    if d not in (2, 3) or d != complexes[0].vertices.dim:
        raise DimensionMismatchError(f"Cannot merge {complexes[0].vertices.dim}D input in {d}D")

    if d == 2:
        return _merge_planar(complexes, config)
    return _merge_spatial(complexes, config)


def box_complex(lo: Sequence[float], hi: Sequence[float]) -> ChainComplex:
    """
    Boundary of an axis-aligned box together with its single top cell.

    Works in 2D (a rectangle: 4 vertices, 4 edges, 1 face) and 3D (8
    vertices, 12 edges, 6 faces, 1 cell). The top cell is positively oriented.
    """
    lo, hi = np.asarray(lo, dtype=np.float64), np.asarray(hi, dtype=np.float64)
    d = len(lo)
    if d not in (2, 3) or len(hi) != d:
        raise DimensionMismatchError("Box corners must both be 2D or 3D")
    corners = np.array(np.meshgrid(*[[0, 1]] * d, indexing="ij")).reshape(d, -1).T[:, ::-1]
    coords = lo + corners * (hi - lo)
    vertices = VertexBuffer(coords)
    # corner k has bit a set when it sits on the high side of axis a
    bits = [[(k >> a) & 1 for a in range(d)] for k in range(2**d)]
    edges = CellArray(
        1,
        tuple(
            (i, j)
            for i in range(2**d)
            for j in range(i + 1, 2**d)
            if sum(x != y for x, y in zip(bits[i], bits[j])) == 1
        ),
    )
    if d == 2:
        faces = CellArray(2, ((0, 1, 2, 3),))
        d2 = boundary2(faces, edges, vertices)
        return ChainComplex(vertices, (point_cells(4), edges, faces), (boundary1(edges), d2))

    faces = CellArray(
        2,
        tuple(
            tuple(k for k in range(8) if bits[k][a] == side) for a in range(3) for side in (0, 1)
        ),
    )
    d2 = boundary2(faces, edges, vertices)
    skeleton = Skeleton.spatial(vertices, edges, faces, d2)
    centre = coords.mean(axis=0)
    column = {}
    for f in range(len(faces)):
        outward = coords[list(faces[f])].mean(axis=0) - centre
        column[f] = 1 if float(skeleton.facet_areas[f] @ outward) > 0 else -1
    d3 = SignedOperator.from_columns([column], len(faces), 2, 3)
    cells = CellArray(3, (tuple(range(8)),))
    return ChainComplex(
        vertices, (point_cells(8), edges, faces, cells), (boundary1(edges), d2, d3)
    )
