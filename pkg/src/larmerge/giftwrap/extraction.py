"""Topological gift wrapping: d-cells as minimal (d-1)-cycles."""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..chains.operators import Chain, SignedOperator
from ..errors import MalformedSkeletonError
from .hinges import HingeOrdering

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BoundaryPlus:
    """[d_d+]: every extracted cell as a column, exterior cell included."""

    operator: SignedOperator
    exterior: Optional[int] = None

    @property
    def n_cells(self) -> int:
        return self.operator.shape[1]

    def columns(self) -> list[dict[int, int]]:
        return self.operator.columns()

    def bounded_columns(self) -> list[int]:
        return [j for j in range(self.n_cells) if j != self.exterior]

    def exterior_chain(self) -> Chain:
        if self.exterior is None:
            raise ValueError("Exterior cell has not been identified")
        return self.operator.column_chain(self.exterior)

    def flipped(self) -> "BoundaryPlus":
        matrix = -self.operator.matrix.astype(np.int8)
        op = SignedOperator(matrix, self.operator.row_dim, self.operator.col_dim)
        return BoundaryPlus(op, self.exterior)


class _Rows:
    """Row access to d_{d-1}: the facets incident to each hinge with their signs."""

    def __init__(self, boundary: SignedOperator):
        csr = boundary.matrix.tocsr()
        csr.sort_indices()
        self.csr = csr
        self.csc = boundary.matrix

    def row(self, hinge: int) -> dict[int, int]:
        start, stop = self.csr.indptr[hinge], self.csr.indptr[hinge + 1]
        return dict(zip(self.csr.indices[start:stop].tolist(), self.csr.data[start:stop].tolist()))

    def column(self, facet: int) -> tuple[np.ndarray, np.ndarray]:
        start, stop = self.csc.indptr[facet], self.csc.indptr[facet + 1]
        return self.csc.indices[start:stop], self.csc.data[start:stop]


def _add_boundary(cb: dict[int, int], rows: _Rows, facet: int, coeff: int) -> None:
    hinges, values = rows.column(facet)
    for tau, a in zip(hinges.tolist(), values.tolist()):
        value = cb.get(tau, 0) + coeff * a
        if value:
            cb[tau] = value
        else:
            cb.pop(tau, None)


def _extract(rows: _Rows, ordering: HingeOrdering, seed: int, sign: int, limit: int):
    cell = {seed: sign}
    cb: dict[int, int] = {}
    _add_boundary(cb, rows, seed, sign)

    steps = 0
    while cb:
        steps += 1
        if steps > limit:
            raise MalformedSkeletonError(
                f"Corolla from facet {seed} did not close after {limit} steps", provenance=seed
            )
        corolla: dict[int, int] = {}
        for tau in sorted(cb):
            incident = rows.row(tau)
            pivots = [f for f in incident if f in cell]
            if not pivots:
                raise MalformedSkeletonError(f"Hinge {tau} lost its pivot", provenance=tau)
            pivot = pivots[0]
            adj = ordering.next(tau, pivot) if cb[tau] > 0 else ordering.prev(tau, pivot)
            if incident[adj] != incident[pivot]:
                corolla[adj] = cell[pivot]
            else:
                corolla[adj] = -cell[pivot]
        for facet, coeff in corolla.items():
            if facet in cell:
                continue
            cell[facet] = coeff
            _add_boundary(cb, rows, facet, coeff)
    return cell


def extract_cell(
    boundary: SignedOperator, ordering: HingeOrdering, seed: int, sign: int = 1
) -> Chain:
    """
    Grow the minimal cycle through ``sign * seed`` by repeated corollas.

    For each hinge on the current boundary the next facet is taken from
    ``ordering`` (Next for positive boundary coefficients, Prev for negative
    ones) and oriented so that the hinge cancels.
    """
    cell = _extract(_Rows(boundary), ordering, seed, sign, 2 * boundary.shape[1])
    return Chain(boundary.col_dim, boundary.shape[1], cell)


def _choose(marks: np.ndarray) -> int:
    once = np.flatnonzero(marks == 1)
    if len(once):
        return int(once[0])
    return int(np.flatnonzero(marks == 0)[0])


def orient_coherently(columns: list[dict[int, int]]) -> list[dict[int, int]]:
    """
    Flip whole columns so that every facet is used with opposite signs.

    Raises:
        MalformedSkeletonError: If no consistent choice exists
    """
    users: dict[int, list[int]] = {}
    for j, column in enumerate(columns):
        for f in column:
            users.setdefault(f, []).append(j)

    neighbours: list[list[tuple[int, int]]] = [[] for _ in columns]
    for f, js in users.items():
        if len(js) == 2:
            a, b = js
            neighbours[a].append((b, f))
            neighbours[b].append((a, f))

    flip = [0] * len(columns)
    for root in range(len(columns)):
        if flip[root]:
            continue
        flip[root] = 1
        queue = deque([root])
        while queue:
            j = queue.popleft()
            for k, f in neighbours[j]:
                wanted = -flip[j] * columns[j][f] * columns[k][f]
                if flip[k] == 0:
                    flip[k] = wanted
                    queue.append(k)
                elif flip[k] != wanted:
                    raise MalformedSkeletonError(
                        f"Cells {j} and {k} cannot be oriented coherently", provenance=f
                    )

    flipped = sum(1 for s in flip if s < 0)
    if flipped:
        logger.debug(f"Reoriented {flipped} of {len(columns)} cells")
    return [col if s > 0 else {f: -a for f, a in col.items()} for col, s in zip(columns, flip)]


def extract_cells(boundary: SignedOperator, ordering: HingeOrdering) -> BoundaryPlus:
    """
    Extract every d-cell of one connected component.

    Seeds come from the usage marks: the lowest facet used once is reseeded
    with the opposite of its first sign, otherwise the lowest unused facet
    is seeded positively. Extraction stops when every facet is used twice.

    Raises:
        MalformedSkeletonError: If a facet is used more than twice
        DanglingFacetError: If a hinge has a single incident facet
    """
    n = boundary.shape[1]
    rows = _Rows(boundary)
    marks = np.zeros(n, dtype=np.int64)
    first_sign = np.zeros(n, dtype=np.int64)
    columns: list[dict[int, int]] = []

    while marks.sum() < 2 * n:
        sigma = _choose(marks)
        sign = 1 if marks[sigma] == 0 else -int(first_sign[sigma])
        cell = _extract(rows, ordering, sigma, sign, 2 * n)
        for f, a in cell.items():
            marks[f] += 1
            if marks[f] > 2:
                raise MalformedSkeletonError(
                    f"Facet {f} is used by more than two cells", provenance=f
                )
            if first_sign[f] == 0:
                first_sign[f] = a
        columns.append(cell)

    columns = orient_coherently(columns)
    logger.debug(f"Extracted {len(columns)} cells from {n} facets")
    operator = SignedOperator.from_columns(columns, n, boundary.col_dim, boundary.col_dim + 1)
    return BoundaryPlus(operator)
