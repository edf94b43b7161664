"""Chain complexes and the (d-1)-skeleton views consumed by cell extraction."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from ..errors import DimensionMismatchError, MalformedSkeletonError
from .cells import CellArray, VertexBuffer, point_cells
from .operators import SignedOperator, boundary1

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """Vertices, skeletons X_0..X_d and boundary operators d_1..d_d."""

    vertices: VertexBuffer
    skeletons: tuple[CellArray, ...]
    operators: tuple[SignedOperator, ...]

    def __post_init__(self):
        if len(self.skeletons) != len(self.operators) + 1:
            raise DimensionMismatchError(
                f"{len(self.skeletons)} skeletons need {len(self.skeletons) - 1} operators"
            )
        for p, op in enumerate(self.operators, start=1):
            expected = (len(self.skeletons[p - 1]), len(self.skeletons[p]))
            if op.shape != expected:
                raise DimensionMismatchError(
                    f"Boundary {p} has shape {op.shape}, expected {expected}"
                )

    @property
    def dim(self) -> int:
        return len(self.operators)

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.skeletons)

    def boundary(self, p: int) -> SignedOperator:
        return self.operators[p - 1]

    def coboundary(self, p: int) -> SignedOperator:
        """The transpose of d_{p+1}, from p-cochains to (p+1)-cochains."""
        return self.operators[p].transpose()

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * n for p, n in enumerate(self.f_vector))

    def is_regularized(self) -> bool:
        """Every lower-dimensional cell lies on the boundary of some top cell."""
        if self.dim == 0:
            return True
        used = np.ones(len(self.skeletons[-1]), dtype=bool)
        for op in reversed(self.operators):
            support = abs(op.matrix)[:, np.flatnonzero(used)]
            used = np.asarray(support.sum(axis=1)).ravel() > 0
            if not used.all():
                return False
        return True

    def validate(self) -> None:
        """
        Check d o d = 0 on every consecutive pair of operators.

        Raises:
            MalformedSkeletonError: If a composition is not exactly zero
        """
        for p in range(1, self.dim):
            product = self.operators[p - 1].compose(self.operators[p])
            product.eliminate_zeros()
            if product.nnz:
                raise MalformedSkeletonError(
                    f"Boundary {p} o boundary {p + 1} has {product.nnz} nonzero entries"
                )


@dataclass(frozen=True, eq=False)
class Skeleton:
    """
    The (d-1)-skeleton of a complex with its geometry.

    In 2D the facets are the edges and the hinges are vertices; in 3D the
    facets are faces (columns of ``boundary2``) and the hinges are edges.
    """

    vertices: VertexBuffer
    edges: CellArray
    boundary1: SignedOperator
    faces: Optional[CellArray] = None
    boundary2: Optional[SignedOperator] = None

    @classmethod
    def planar(cls, vertices: VertexBuffer, edges: CellArray) -> "Skeleton":
        return cls(vertices, edges, boundary1(edges, n_vertices=vertices.n))

    @classmethod
    def spatial(
        cls,
        vertices: VertexBuffer,
        edges: CellArray,
        faces: CellArray,
        boundary2: SignedOperator,
    ) -> "Skeleton":
        return cls(vertices, edges, boundary1(edges, n_vertices=vertices.n), faces, boundary2)

    @property
    def dim(self) -> int:
        return 3 if self.boundary2 is not None else 2

    @property
    def facets(self) -> CellArray:
        return self.faces if self.dim == 3 else self.edges

    @property
    def facet_boundary(self) -> SignedOperator:
        """d_{d-1}: hinges x facets."""
        return self.boundary2 if self.dim == 3 else self.boundary1

    @property
    def n_facets(self) -> int:
        return self.facet_boundary.shape[1]

    @cached_property
    def facet_edge_columns(self) -> list[dict[int, int]]:
        return self.boundary2.columns() if self.dim == 3 else []

    @cached_property
    def edge_points(self) -> tuple[np.ndarray, np.ndarray]:
        """Tail and head coordinates of every edge, oriented low to high."""
        ev = np.array(self.edges.cells, dtype=np.int64).reshape(-1, 2)
        ev.sort(axis=1)
        return self.vertices.coords[ev[:, 0]], self.vertices.coords[ev[:, 1]]

    @cached_property
    def facet_areas(self) -> np.ndarray:
        """Vector areas of the faces under their column orientation (3D)."""
        tails, heads = self.edge_points
        crosses = np.cross(tails, heads)
        areas = np.zeros((self.n_facets, 3))
        for f, column in enumerate(self.facet_edge_columns):
            for e, s in column.items():
                areas[f] += 0.5 * s * crosses[e]
        return areas

    @cached_property
    def facet_anchor(self) -> np.ndarray:
        """One vertex on each facet."""
        if self.dim == 2:
            return self.edge_points[0]
        return np.array([self.vertices.coords[cell[0]] for cell in self.faces.cells])

    def facet_vertices(self, f: int) -> tuple[int, ...]:
        return self.facets[f]

    def to_complex(self) -> ChainComplex:
        skeletons = [point_cells(self.vertices.n), self.edges]
        operators = [self.boundary1]
        if self.dim == 3:
            skeletons.append(self.faces)
            operators.append(self.boundary2)
        return ChainComplex(self.vertices, tuple(skeletons), tuple(operators))


def boundary3(cells: CellArray, skeleton: Skeleton) -> SignedOperator:
    """
    Signed boundary of 3-cells given by vertex sets.

    A cell's faces are those whose vertices all belong to it. Their signs are
    propagated across shared edges so that the boundary of the column
    vanishes, and the column is flipped to enclose a positive volume.

    Raises:
        MalformedSkeletonError: If the faces of a cell cannot form a closed cycle
    """
    face_sets = [set(f) for f in skeleton.faces]
    edge_columns = skeleton.facet_edge_columns
    areas, anchors = skeleton.facet_areas, skeleton.facet_anchor

    columns = []
    for k, cell in enumerate(cells):
        members = set(cell)
        faces = [f for f, vs in enumerate(face_sets) if vs <= members]
        by_edge: dict[int, list[int]] = {}
        for f in faces:
            for e in edge_columns[f]:
                by_edge.setdefault(e, []).append(f)
        if not faces or any(len(fs) != 2 for fs in by_edge.values()):
            raise MalformedSkeletonError(f"Faces of 3-cell {k} do not close", provenance=k)

        column = {faces[0]: 1}
        stack = [faces[0]]
        while stack:
            f = stack.pop()
            for e, s in edge_columns[f].items():
                g = next(x for x in by_edge[e] if x != f)
                wanted = -column[f] * s * edge_columns[g][e]
                if g not in column:
                    column[g] = wanted
                    stack.append(g)
                elif column[g] != wanted:
                    raise MalformedSkeletonError(
                        f"Faces of 3-cell {k} cannot be oriented", provenance=k
                    )
        if len(column) != len(faces):
            raise MalformedSkeletonError(f"Faces of 3-cell {k} are not connected", provenance=k)

        volume = sum(a * float(anchors[f] @ areas[f]) for f, a in column.items())
        if volume < 0:
            column = {f: -a for f, a in column.items()}
        columns.append(column)
    return SignedOperator.from_columns(columns, skeleton.n_facets, 2, 3)
