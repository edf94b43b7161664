"""Chains, signed sparse operators and the queries built on them."""

import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping, Optional, Union

import numpy as np
import scipy.sparse as sp

from ..errors import (
    DegenerateCellError,
    DimensionMismatchError,
    MalformedInputError,
)
from .cells import CellArray, VertexBuffer
from .geometry import canonical_sign, newell_normal, plane_frame, shoelace

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"^([+-]?)(?:(\d+)\*)?(\d+)$")


@dataclass(frozen=True, eq=False)
class Chain:
    """
    Sparse combination of p-cells.

    Signed chains carry exact integer coefficients; parsed chains and cells
    start at -1 or +1, sums and boundaries keep whatever multiplicity they
    reach. Unsigned chains are subsets of the basis (coefficients modulo 2).
    """

    dim: int
    size: int
    entries: Mapping[int, int] = field(default_factory=dict)
    signed: bool = True

    def __post_init__(self):
        entries = {}
        for index, coeff in self.entries.items():
            index, coeff = int(index), int(coeff)
            if coeff == 0:
                continue
            if not 0 <= index < self.size:
                raise DimensionMismatchError(
                    f"Chain index {index} outside the {self.dim}-cell basis of size {self.size}"
                )
            if not self.signed and coeff != 1:
                raise ValueError(f"Unsigned chain coefficient must be 1, got {coeff}")
            entries[index] = coeff
        object.__setattr__(self, "entries", dict(sorted(entries.items())))

    @classmethod
    def from_dense(cls, values: Iterable[int], dim: int, signed: bool = True) -> "Chain":
        values = np.asarray(list(values), dtype=np.int64)
        nz = np.flatnonzero(values)
        return cls(dim, len(values), {int(i): int(values[i]) for i in nz}, signed)

    @classmethod
    def from_tokens(cls, text: str, dim: int, size: int, signed: bool = True) -> "Chain":
        """
        Parse a "(+|-)[k*]index" token list such as "1,-2,4", "-0 +4" or "+2*1".

        Raises:
            MalformedInputError: On unreadable tokens or repeated indices
        """
        entries: dict[int, int] = {}
        for token in filter(None, re.split(r"[\s,]+", text.strip())):
            match = _TOKEN.match(token)
            if not match:
                raise MalformedInputError(f"Invalid chain token: {token!r}")
            index = int(match.group(3))
            if index in entries:
                raise MalformedInputError(f"Cell {index} repeated in chain")
            multiplicity = int(match.group(2) or 1)
            if not signed:
                multiplicity %= 2
            entries[index] = -multiplicity if match.group(1) == "-" and signed else multiplicity
        return cls(dim, size, entries, signed)

    def tokens(self) -> list[str]:
        return [
            f"{'-' if c < 0 else '+'}{f'{abs(c)}*' if abs(c) > 1 else ''}{i}"
            for i, c in self.entries.items()
        ]

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.size, dtype=np.int64)
        for i, c in self.entries.items():
            out[i] = c
        return out

    def support(self) -> set[int]:
        return set(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __neg__(self) -> "Chain":
        if not self.signed:
            return self
        return Chain(self.dim, self.size, {i: -c for i, c in self.entries.items()}, True)

    def __add__(self, other: "Chain") -> "Chain":
        if (self.dim, self.size, self.signed) != (other.dim, other.size, other.signed):
            raise DimensionMismatchError("Cannot add chains over different bases")
        dense = self.to_dense() + other.to_dense()
        if not self.signed:
            dense %= 2
        return Chain.from_dense(dense, self.dim, self.signed)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.dim, self.size, self.signed, self.entries) == (
            other.dim,
            other.size,
            other.signed,
            other.entries,
        )

    def __repr__(self) -> str:
        return f"Chain(dim={self.dim}, {' '.join(self.tokens()) or '0'})"


@dataclass(frozen=True, eq=False)
class SignedOperator:
    """
    Sparse operator with coefficients in {-1, 0, +1}, stored column-compressed.

    Columns are ``col_dim``-cells written as ``row_dim``-chains, so a boundary
    operator has ``row_dim == col_dim - 1`` and its transpose (the coboundary)
    has the dimensions swapped.
    """

    matrix: sp.csc_matrix
    row_dim: int
    col_dim: int
    signed: bool = True

    def __post_init__(self):
        matrix = sp.csc_matrix(self.matrix, dtype=np.int8)
        matrix.eliminate_zeros()
        matrix.sort_indices()
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_triples(
        cls,
        triples: Iterable[tuple[int, int, int]],
        shape: tuple[int, int],
        row_dim: int,
        col_dim: int,
        signed: bool = True,
    ) -> "SignedOperator":
        triples = list(triples)
        if triples:
            rows, cols, vals = (np.asarray(x, dtype=np.int64) for x in zip(*triples))
        else:
            rows = cols = vals = np.zeros(0, dtype=np.int64)
        if len(rows) and (rows.max() >= shape[0] or cols.max() >= shape[1]):
            raise MalformedInputError(f"Operator triple outside shape {shape}")
        matrix = sp.csc_matrix((vals.astype(np.int8), (rows, cols)), shape=shape, dtype=np.int8)
        return cls(matrix, row_dim, col_dim, signed)

    @classmethod
    def from_columns(
        cls,
        columns: Iterable[Mapping[int, int]],
        n_rows: int,
        row_dim: int,
        col_dim: int,
        signed: bool = True,
    ) -> "SignedOperator":
        columns = list(columns)
        triples = [(i, j, a) for j, col in enumerate(columns) for i, a in col.items() if a]
        return cls.from_triples(triples, (n_rows, len(columns)), row_dim, col_dim, signed)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def triples(self) -> list[tuple[int, int, int]]:
        """(row, col, coeff) triples in column-major order."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.row, coo.col))
        return [(int(coo.row[k]), int(coo.col[k]), int(coo.data[k])) for k in order]

    def column(self, j: int) -> dict[int, int]:
        start, stop = self.matrix.indptr[j], self.matrix.indptr[j + 1]
        return {
            int(i): int(a)
            for i, a in zip(self.matrix.indices[start:stop], self.matrix.data[start:stop])
        }

    def columns(self) -> list[dict[int, int]]:
        return [self.column(j) for j in range(self.shape[1])]

    def column_chain(self, j: int) -> Chain:
        return Chain(self.row_dim, self.shape[0], self.column(j), self.signed)

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def transpose(self) -> "SignedOperator":
        return SignedOperator(self.matrix.T.tocsc(), self.col_dim, self.row_dim, self.signed)

    def unsigned(self) -> "SignedOperator":
        return SignedOperator(abs(self.matrix), self.row_dim, self.col_dim, False)

    def compose(self, other: "SignedOperator") -> sp.csc_matrix:
        """Integer product ``self @ other`` (no reduction of coefficients)."""
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatchError(
                f"Cannot compose {self.shape} with {other.shape}"
            )
        return (self.matrix.astype(np.int32) @ other.matrix.astype(np.int32)).tocsc()

    def select_columns(self, cols: Iterable[int]) -> "SignedOperator":
        cols = np.asarray(list(cols), dtype=np.int64)
        return SignedOperator(self.matrix[:, cols], self.row_dim, self.col_dim, self.signed)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignedOperator):
            return NotImplemented
        if self.shape != other.shape or self.signed != other.signed:
            return False
        return (self.matrix != other.matrix).nnz == 0

    def __repr__(self) -> str:
        kind = "signed" if self.signed else "unsigned"
        return f"SignedOperator({self.row_dim}<-{self.col_dim}, shape={self.shape}, {kind})"


def boundary1(
    edges: CellArray, signed: bool = True, n_vertices: Optional[int] = None
) -> SignedOperator:
    """
    Boundary of 1-cells, oriented from the lesser to the greater vertex index.

    Raises:
        DegenerateCellError: If an edge does not have two distinct vertices
    """
    n = edges.max_index() + 1 if n_vertices is None else n_vertices
    rows, cols, vals = [], [], []
    for j, edge in enumerate(edges.cells):
        if len(edge) != 2 or edge[0] == edge[1]:
            raise DegenerateCellError(f"Edge {j} is degenerate: {list(edge)}", provenance=j)
        h, k = min(edge), max(edge)
        rows += [h, k]
        cols += [j, j]
        vals += [-1, 1] if signed else [1, 1]
    matrix = sp.csc_matrix(
        (np.asarray(vals, dtype=np.int8), (rows, cols)), shape=(n, len(edges)), dtype=np.int8
    )
    return SignedOperator(matrix, 0, 1, signed)


def apply(
    op: SignedOperator, c: Chain, mode: Literal["signed", "mod2"] = "signed"
) -> Chain:
    """
    Sparse matrix-vector product of an operator with a chain.

    In signed mode the result is the exact integer product, so the boundary
    of a path that is not a cycle may carry coefficients beyond +-1. In mod2
    mode coefficients are reduced modulo 2 and the result is unsigned.

    Raises:
        DimensionMismatchError: If the chain is not over the operator's column basis
    """
    if c.size != op.shape[1] or c.dim != op.col_dim:
        raise DimensionMismatchError(
            f"Chain over {c.size} {c.dim}-cells does not match operator {op!r}"
        )
    x = np.zeros(op.shape[1], dtype=np.int64)
    for i, a in c.entries.items():
        x[i] = a
    y = op.matrix.astype(np.int64) @ x
    if mode == "mod2":
        return Chain.from_dense(np.abs(y) % 2, op.row_dim, signed=False)
    return Chain.from_dense(y, op.row_dim, signed=True)


def coboundary(op: SignedOperator) -> SignedOperator:
    """Transpose of a boundary operator, acting on cochains."""
    return op.transpose()


def _as_matrix(m: Union[CellArray, sp.spmatrix], n: int) -> sp.csr_matrix:
    if isinstance(m, CellArray):
        return m.characteristic_matrix(n)
    return sp.csr_matrix(m)


def adjacency(
    mp: Union[CellArray, sp.spmatrix],
    mq: Union[CellArray, sp.spmatrix],
    threshold: int = 1,
    *,
    at_least: bool = False,
    exclude_diagonal: Optional[bool] = None,
    n_vertices: Optional[int] = None,
) -> list[list[int]]:
    """
    Filter the product of two characteristic matrices.

    Rows of ``mp`` and ``mq`` are cells over a common basis; the product
    ``mp @ mq.T`` counts shared basis elements. Entries equal to ``threshold``
    (or at least it) are kept. Pass transposed matrices to relate vertices,
    e.g. ``adjacency(M1.T, M1.T)`` is the VV relation.

    Args:
        mp: Left cell array or characteristic matrix
        mq: Right cell array or characteristic matrix
        threshold: Number of shared basis elements
        at_least: Keep entries >= threshold instead of == threshold
        exclude_diagonal: Drop i == i pairs (default: when mp is mq)
        n_vertices: Basis size for cell arrays

    Returns:
        Per-row sorted lists of related column indices
    """
    if n_vertices is None:
        sizes = [m.max_index() + 1 for m in (mp, mq) if isinstance(m, CellArray)]
        sizes += [m.shape[1] for m in (mp, mq) if not isinstance(m, CellArray)]
        n_vertices = max(sizes, default=0)
    if exclude_diagonal is None:
        exclude_diagonal = mp is mq

    a = _as_matrix(mp, n_vertices).astype(np.int32)
    b = _as_matrix(mq, n_vertices).astype(np.int32)
    product = (a @ b.T).tocsr()
    product.sort_indices()

    result = []
    for i in range(product.shape[0]):
        start, stop = product.indptr[i], product.indptr[i + 1]
        cols = product.indices[start:stop]
        vals = product.data[start:stop]
        keep = vals >= threshold if at_least else vals == threshold
        row = [int(j) for j in cols[keep] if not (exclude_diagonal and j == i)]
        result.append(row)
    return result


def _face_loops(face_edges: list[int], edges: CellArray, face: int) -> list[list[tuple[int, int]]]:
    """Split a face's edge set into closed loops of (edge, traversal sign) pairs."""
    incident: dict[int, list[int]] = {}
    for e in face_edges:
        for v in edges[e]:
            incident.setdefault(v, []).append(e)
    odd = [v for v, es in incident.items() if len(es) % 2]
    if odd or not face_edges:
        raise MalformedInputError(
            f"Face {face} boundary is not closed (odd vertices {odd})", provenance=face
        )

    unused = set(face_edges)
    loops = []
    while unused:
        first = min(unused)
        a, b = edges[first]
        loop = [(first, 1)]
        unused.discard(first)
        current = b
        while current != a:
            nxt = min(e for e in incident[current] if e in unused)
            unused.discard(nxt)
            h, k = edges[nxt]
            loop.append((nxt, 1 if h == current else -1))
            current = k if h == current else h
        loops.append(loop)
    return loops


def _loop_points(loop: list[tuple[int, int]], edges: CellArray, coords: np.ndarray) -> np.ndarray:
    return np.array([coords[edges[e][0] if s > 0 else edges[e][1]] for e, s in loop])


def boundary2(
    faces: CellArray,
    edges: CellArray,
    vertices: Optional[VertexBuffer] = None,
) -> SignedOperator:
    """
    Assemble the signed boundary of 2-cells from FV, EV and coordinates.

    A face's edges are those with both vertices in the face (entry 2 of
    M2 @ M1.T). In 2D outer loops run counterclockwise and holes clockwise;
    in 3D the same rule is applied in the face plane and the column is then
    flipped so its lowest-index edge has coefficient +1. Without coordinates
    only the first-edge rule is applied.

    Raises:
        MalformedInputError: If a face's edges do not form closed loops
    """
    n = max(faces.max_index(), edges.max_index()) + 1
    if vertices is not None:
        n = max(n, vertices.n)
    fe = (
        faces.characteristic_matrix(n).astype(np.int32)
        @ edges.characteristic_matrix(n).astype(np.int32).T
    ).tocsr()

    columns = []
    for f in range(len(faces)):
        start, stop = fe.indptr[f], fe.indptr[f + 1]
        face_edges = sorted(
            int(e) for e, k in zip(fe.indices[start:stop], fe.data[start:stop]) if k == 2
        )
        loops = _face_loops(face_edges, edges, f)
        if vertices is not None:
            loops = _orient_loops(loops, edges, vertices)
        column = {e: s for loop in loops for e, s in loop}
        if vertices is None or vertices.dim == 3:
            lowest = min(column)
            if column[lowest] < 0:
                column = {e: -s for e, s in column.items()}
        columns.append(column)

    return SignedOperator.from_columns(columns, len(edges), 1, 2)


def _orient_loops(loops, edges: CellArray, vertices: VertexBuffer):
    coords = vertices.coords
    if vertices.dim == 3:
        normals = [newell_normal(_loop_points(loop, edges, coords)) for loop in loops]
        outer = int(np.argmax([np.linalg.norm(n) for n in normals]))
        frame = plane_frame(canonical_sign(normals[outer]))
        coords = coords @ frame[:2].T
    areas = [shoelace(_loop_points(loop, edges, coords)) for loop in loops]
    outer = int(np.argmax(np.abs(areas)))
    oriented = []
    for k, (loop, area) in enumerate(zip(loops, areas)):
        wanted = 1.0 if k == outer else -1.0
        oriented.append(loop if area * wanted > 0 else [(e, -s) for e, s in loop])
    return oriented
