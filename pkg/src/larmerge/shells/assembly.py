"""Peeling of exterior shells and assembly of the global top-dimensional boundary."""

import logging
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from ..chains.cells import CellArray
from ..chains.complex import Skeleton
from ..chains.operators import Chain, SignedOperator
from ..errors import InconsistentContainmentError
from ..giftwrap import BoundaryPlus, build_hinge_ordering, extract_cells, orient_positive
from ..processors import FragmentProcessor
from .components import Component, ComponentSet, split_components
from .containment import ContainmentTree, cast, containment, shell_sample_point

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PeeledComponent:
    """A component's oriented [d_d+] split into its shell and bounded cells."""

    component: Component
    boundary: BoundaryPlus
    shell: Chain
    cells: SignedOperator


@dataclass(frozen=True, eq=False)
class Assembly:
    """Result of shell assembly on a whole skeleton."""

    boundary: SignedOperator
    cells: CellArray
    shells: tuple[Chain, ...]
    tree: ContainmentTree
    components: ComponentSet
    cell_components: np.ndarray

    @property
    def n_cells(self) -> int:
        return self.boundary.shape[1]


def peel(boundary: BoundaryPlus, skeleton: Skeleton) -> tuple[Chain, SignedOperator]:
    """
    Split a component's [d_d+] into its exterior cycle and its bounded cells.

    The exterior is identified (and the columns oriented) first when the
    boundary does not carry it yet.
    """
    if boundary.exterior is None:
        boundary = orient_positive(boundary, skeleton)
    shell = boundary.exterior_chain()
    return shell, boundary.operator.select_columns(boundary.bounded_columns())


def peel_component(component: Component) -> PeeledComponent:
    """Hinge ordering, gift wrapping and peeling of one connected component."""
    local = component.skeleton
    ordering = build_hinge_ordering(local)
    boundary = orient_positive(extract_cells(local.facet_boundary, ordering), local)
    shell, cells = peel(boundary, local)
    logger.debug(
        f"Component with {component.n_facets} facets: {cells.shape[1]} bounded cells"
    )
    return PeeledComponent(component, boundary, shell, cells)


def _outward_normal(skeleton: Skeleton, facet: int) -> np.ndarray:
    if skeleton.dim == 2:
        tails, heads = skeleton.edge_points
        t = heads[facet] - tails[facet]
        return np.array([t[1], -t[0]])
    return skeleton.facet_areas[facet]


def find_container_cell(
    point: np.ndarray, boundary: BoundaryPlus, skeleton: Skeleton, tol: float
) -> int:
    """
    Column of ``boundary`` whose cell contains ``point``.

    A ray is shot from the point to the nearest facet; of the two cells
    sharing that facet, the container is the one the ray leaves through it.

    Raises:
        InconsistentContainmentError: If the ray hits nothing or the point
            lies in the exterior cell
    """
    direction, hits = cast(point, skeleton, range(skeleton.n_facets), tol)
    if not hits:
        raise InconsistentContainmentError(
            f"Ray from {point.tolist()} hits no facet of the container component"
        )
    _, facet = min(hits)
    outward = float(_outward_normal(skeleton, facet) @ direction)
    for k, column in enumerate(boundary.columns()):
        if column.get(facet, 0) * outward > 0:
            if k == boundary.exterior:
                break
            return k
    raise InconsistentContainmentError(
        f"Point {point.tolist()} is not inside a bounded cell", provenance=facet
    )


def _globalize(column: Mapping[int, int], component: Component) -> dict[int, int]:
    return {int(component.facets[f]): a for f, a in column.items()}


def assemble(
    components: ComponentSet,
    peeled: list[PeeledComponent],
    tree: ContainmentTree,
    tol: float,
    parity: bool = False,
) -> tuple[SignedOperator, CellArray, np.ndarray]:
    """
    Concatenate the bounded cells of all components into the global d_d.

    Every cell that directly contains another component is punctured: the
    inner shell joins its boundary cycle. With ``parity`` components at odd
    containment depth are void, so their cells are dropped and they only
    puncture their container.

    Returns:
        (d_d, LAR_d, component index of every column)
    """
    skeleton = components.skeleton
    void = {i for i in range(len(peeled)) if parity and tree.depth[i] % 2 == 1}

    columns: list[dict[int, int]] = []
    owners: list[int] = []
    position: dict[tuple[int, int], int] = {}
    for p, pc in enumerate(peeled):
        if p in void:
            continue
        for k, j in enumerate(pc.boundary.bounded_columns()):
            position[(p, j)] = len(columns)
            columns.append(_globalize(pc.cells.column(k), pc.component))
            owners.append(p)

    punctured = 0
    for i, j in tree.arcs:
        if j in void:
            continue
        inner = peeled[i]
        point = shell_sample_point(inner.shell.entries, inner.component.skeleton)
        k = find_container_cell(point, peeled[j].boundary, peeled[j].component.skeleton, tol)
        target = columns[position[(j, k)]]
        for f, a in _globalize(inner.shell.entries, inner.component).items():
            value = target.get(f, 0) + a
            if value:
                target[f] = value
            else:
                target.pop(f, None)
        punctured += 1

    n_rows = skeleton.n_facets
    d = skeleton.dim
    boundary = SignedOperator.from_columns(columns, n_rows, d - 1, d)
    facets = skeleton.facets.cells
    cells = CellArray(d, tuple(tuple(sorted({v for f in c for v in facets[f]})) for c in columns))
    logger.info(
        f"Assembled {len(columns)} cells from {len(peeled)} components "
        f"({punctured} punctured, {len(void)} void)"
    )
    return boundary, cells, np.asarray(owners, dtype=np.int64)


def arrange_skeleton(
    skeleton: Skeleton,
    tol: float,
    parity: bool = False,
    jobs: int = 1,
    deterministic: bool = True,
) -> Assembly:
    """
    Extract the top-dimensional cells of a regular (d-1)-skeleton.

    Components are wrapped independently, then nested by shell containment.
    """
    components = split_components(skeleton)
    processor = FragmentProcessor(jobs=jobs, deterministic=deterministic)
    peeled: list[Optional[PeeledComponent]] = [None] * len(components)
    for index, result in processor.map(peel_component, components.components):
        peeled[index] = result

    shells = [pc.shell.entries for pc in peeled]
    tree = containment(components, shells, tol)
    boundary, cells, owners = assemble(components, peeled, tree, tol, parity)
    global_shells = tuple(
        Chain(skeleton.dim - 1, skeleton.n_facets, _globalize(s, pc.component))
        for s, pc in zip(shells, peeled)
    )
    return Assembly(boundary, cells, global_shells, tree, components, owners)


def locate(
    point: np.ndarray, boundary: SignedOperator, skeleton: Skeleton, tol: float
) -> Optional[int]:
    """
    Index of the column of ``boundary`` whose cell contains ``point``.

    Returns None when the point lies in no cell (the exterior or a void).

    Raises:
        DegenerateGeometryError: If the point lies on a facet
    """
    point = np.asarray(point, dtype=np.float64)
    used = np.flatnonzero(np.diff(boundary.matrix.tocsr().indptr))
    _, hits = cast(point, skeleton, used, tol)
    crossed = np.zeros(skeleton.n_facets, dtype=np.int64)
    for _, f in hits:
        crossed[f] += 1
    counts = abs(boundary.matrix).T @ crossed
    inside = np.flatnonzero(np.asarray(counts).ravel() % 2 == 1)
    return int(inside[0]) if len(inside) else None
