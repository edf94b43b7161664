"""Hinge orderings, cell extraction and orientation."""

import numpy as np
import pytest

from conftest import TRIANGLE_D2
from larmerge.chains.cells import CellArray, VertexBuffer
from larmerge.chains.complex import Skeleton
from larmerge.errors import DanglingFacetError, NotACycleError
from larmerge.giftwrap.extraction import (
    BoundaryPlus,
    extract_cell,
    extract_cells,
    orient_coherently,
)
from larmerge.giftwrap.hinges import HingeOrdering, build_hinge_ordering
from larmerge.giftwrap.volumes import identify_exterior, orient_positive, signed_volume


def planar_skeleton(complex_):
    return Skeleton.planar(complex_.vertices, complex_.skeletons[1])


def spatial_skeleton(complex_):
    return Skeleton.spatial(
        complex_.vertices, complex_.skeletons[1], complex_.skeletons[2], complex_.boundary(2)
    )


def test_hinge_cycle_around_vertex(star_skeleton):
    ordering = build_hinge_ordering(star_skeleton)
    assert ordering.cycle(12).tolist() == [12, 10, 11, 13]
    assert ordering.next(12, 13) == 12
    assert ordering.prev(12, 12) == 13


def test_extract_cell_from_seed(star_skeleton):
    ordering = build_hinge_ordering(star_skeleton)
    cell = extract_cell(star_skeleton.boundary1, ordering, 12, 1)
    assert cell.entries == {7: -1, 8: 1, 10: 1, 12: 1, 17: -1}


def test_extracted_cell_is_a_cycle(star_skeleton):
    ordering = build_hinge_ordering(star_skeleton)
    cell = extract_cell(star_skeleton.boundary1, ordering, 12, -1)
    assert signed_volume(cell, star_skeleton) != 0.0


def test_single_facet_hinge_is_dangling():
    ordering = HingeOrdering([np.array([3])])
    with pytest.raises(DanglingFacetError):
        ordering.next(0, 3)


def test_extract_all_triangle_cells(triangle_complex):
    skeleton = planar_skeleton(triangle_complex)
    boundary = extract_cells(skeleton.boundary1, build_hinge_ordering(skeleton))
    assert boundary.n_cells == 4
    plus = boundary.operator.to_dense()
    assert np.all(np.abs(plus).sum(axis=1) == 2)
    assert np.all(plus.sum(axis=1) == 0)


def test_orient_positive_finds_exterior(triangle_complex):
    skeleton = planar_skeleton(triangle_complex)
    boundary = extract_cells(skeleton.boundary1, build_hinge_ordering(skeleton))
    oriented = orient_positive(boundary, skeleton)

    columns = oriented.columns()
    assert signed_volume(columns[oriented.exterior], skeleton) == pytest.approx(-0.5)
    bounded = [columns[k] for k in oriented.bounded_columns()]
    assert all(signed_volume(c, skeleton) > 0 for c in bounded)

    expected = [
        {e: int(s) for e, s in enumerate(np.array(TRIANGLE_D2)[:, f]) if s} for f in range(3)
    ]
    assert sorted(map(sorted, (c.items() for c in bounded))) == sorted(
        map(sorted, (c.items() for c in expected))
    )
    assert oriented.exterior_chain().entries == columns[oriented.exterior]


def test_flipped_keeps_exterior(triangle_complex):
    skeleton = planar_skeleton(triangle_complex)
    boundary = extract_cells(skeleton.boundary1, build_hinge_ordering(skeleton))
    exterior = identify_exterior(boundary, skeleton)
    flipped = BoundaryPlus(boundary.operator, exterior).flipped()
    assert flipped.exterior == exterior
    assert flipped.operator.column(0) == {e: -s for e, s in boundary.operator.column(0).items()}


def test_cube_has_inside_and_outside(unit_cube):
    skeleton = spatial_skeleton(unit_cube)
    ordering = build_hinge_ordering(skeleton)
    assert all(len(ordering.cycle(e)) == 2 for e in range(12))

    boundary = orient_positive(extract_cells(skeleton.boundary2, ordering), skeleton)
    assert boundary.n_cells == 2
    (inside,) = boundary.bounded_columns()
    assert signed_volume(boundary.operator.column(inside), skeleton) == pytest.approx(1.0)
    assert signed_volume(boundary.exterior_chain(), skeleton) == pytest.approx(-1.0)
    assert boundary.operator.column(inside) == unit_cube.boundary(3).column(0)


def test_coherent_orientation_flips_neighbours():
    columns = [{0: 1, 1: 1}, {0: 1, 1: 1}]
    oriented = orient_coherently(columns)
    assert oriented[0] == {0: 1, 1: 1}
    assert oriented[1] == {0: -1, 1: -1}


def test_volume_of_open_chain():
    vertices = VertexBuffer.from_list([[0, 0], [1, 0], [1, 1]])
    skeleton = Skeleton.planar(vertices, CellArray.from_list(1, [[0, 1], [1, 2], [0, 2]]))
    assert signed_volume({0: 1, 1: 1, 2: -1}, skeleton) == pytest.approx(0.5)
    with pytest.raises(NotACycleError):
        signed_volume({0: 1, 1: 1}, skeleton)
