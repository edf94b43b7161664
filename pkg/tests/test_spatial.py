"""Box indexing and vertex welding."""

import numpy as np
import pytest

from larmerge.chains.cells import VertexBuffer
from larmerge.errors import UnknownCellError
from larmerge.planar.segments import SegmentSoup, intersect_pair
from larmerge.spatial.index import BoxSet, build_index, possible_intersections
from larmerge.spatial.quotient import quotient_vertices


def test_boxes_of_cells():
    coords = np.array([[0, 0], [2, 1], [1, 3]], dtype=float)
    boxes = BoxSet.from_cells(coords, [[0, 1], [1, 2]])
    assert boxes.lo.tolist() == [[0, 0], [1, 1]]
    assert boxes.hi.tolist() == [[2, 1], [2, 3]]
    assert boxes.padded(0.5).lo.tolist() == [[-0.5, -0.5], [0.5, 0.5]]


def test_touching_boxes_overlap():
    boxes = BoxSet(np.array([[0, 0], [1, 0], [3, 3]]), np.array([[1, 1], [2, 1], [4, 4]]))
    index = build_index(boxes)
    assert index.possible_intersections(0) == {1}
    assert possible_intersections(index, 1) == {0}
    assert index.possible_intersections(2) == set()


def test_query_box_intersects_axes():
    boxes = BoxSet(np.array([[0, 0, 0], [0, 5, 0]]), np.array([[1, 1, 1], [1, 6, 1]]))
    index = build_index(boxes)
    assert index.query_box([0.5, 0.5, 0.5], [2, 2, 2]) == {0}
    assert index.query_box([0.5, 2, 0.5], [2, 3, 2]) == set()


def test_index_matches_brute_force():
    rng = np.random.default_rng(7)
    lo = rng.uniform(0, 10, size=(60, 3))
    hi = lo + rng.uniform(0, 2, size=(60, 3))
    boxes = BoxSet(lo, hi)
    index = build_index(boxes)
    for i in range(len(boxes)):
        expected = {j for j in range(len(boxes)) if j != i and boxes.overlaps(i, j)}
        assert index.possible_intersections(i) == expected


def test_unknown_cell():
    index = build_index(BoxSet(np.zeros((1, 2)), np.ones((1, 2))))
    with pytest.raises(UnknownCellError):
        index.possible_intersections(3)


def test_inverted_box_is_rejected():
    with pytest.raises(ValueError):
        BoxSet(np.ones((1, 2)), np.zeros((1, 2)))


def test_quotient_keeps_lowest_index():
    raw = VertexBuffer(np.array([[1.0, 0.0], [0.0, 0.0], [1.0, 1e-9], [0.0, 1e-9], [5.0, 5.0]]))
    quotient = quotient_vertices(raw, 1e-6)
    assert quotient.merged.n == 3
    assert quotient.representative.tolist() == [0, 1, 0, 1, 2]
    assert quotient.merged.coords.tolist() == [[1.0, 0.0], [0.0, 0.0], [5.0, 5.0]]
    assert quotient.remap([2, 4]).tolist() == [0, 2]


def test_quotient_leaves_distant_vertices():
    raw = VertexBuffer(np.eye(3))
    quotient = quotient_vertices(raw, 1e-3)
    assert len(quotient) == 3
    assert quotient.representative.tolist() == [0, 1, 2]


def test_quotient_needs_positive_radius():
    with pytest.raises(ValueError):
        quotient_vertices(VertexBuffer(np.zeros((2, 2))), 0.0)


@pytest.mark.parametrize("seed", range(5))
def test_candidates_cover_every_segment_crossing(seed):
    rng = np.random.default_rng(seed)
    start = rng.uniform(0, 10, size=(80, 2))
    soup = SegmentSoup(np.stack([start, start + rng.uniform(-3, 3, size=(80, 2))], axis=1))
    eps = 1e-9
    index = build_index(soup.boxes().padded(eps))
    crossings = 0
    for i in range(len(soup)):
        candidates = index.possible_intersections(i)
        for j in range(i + 1, len(soup)):
            if intersect_pair(soup.segments[i], soup.segments[j], eps):
                crossings += 1
                assert j in candidates
                assert i in index.possible_intersections(j)
    assert crossings > 0


@pytest.mark.parametrize("dim", [2, 3])
def test_jittered_grid_welds_back_to_the_grid(dim):
    rng = np.random.default_rng(dim)
    axes = [np.arange(5, dtype=float)] * dim
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    eps = 1e-3
    copies = np.repeat(grid, 3, axis=0)
    order = rng.permutation(len(copies))
    jittered = copies[order] + rng.uniform(-eps / 10, eps / 10, size=copies.shape)

    quotient = quotient_vertices(VertexBuffer(jittered), eps)
    assert quotient.merged.n == len(grid)
    owner = np.repeat(np.arange(len(grid)), 3)[order]
    for g in range(len(grid)):
        assert len(set(quotient.representative[owner == g].tolist())) == 1
    assert np.abs(quotient.merged.coords[quotient.representative] - copies[order]).max() < eps
