"""Face sections, subdivision and 3D merging."""

import itertools

import numpy as np
import pytest
from scipy.spatial import cKDTree

from larmerge.chains.cells import CellArray, VertexBuffer
from larmerge.chains.complex import ChainComplex, Skeleton
from larmerge.chains.operators import boundary2
from larmerge.config import RunConfig
from larmerge.errors import (
    DegenerateFacetError,
    DimensionMismatchError,
    EmptyInputError,
    InconsistentFacetError,
    LarmergeError,
)
from larmerge.pipeline.facets import subdivide_facet
from larmerge.pipeline.merge import box_complex, derive_edges, merge, prune_dangling_faces
from larmerge.pipeline.section import plane_section
from larmerge.pipeline.submanifold import plane_map, submanifold_map
from larmerge.processors import FragmentProcessor
from larmerge.readers.base import build_complex
from larmerge.writers import LarWriter

EPS = 1e-9


def spatial_skeleton(complex_):
    return Skeleton.spatial(
        complex_.vertices, complex_.skeletons[1], complex_.skeletons[2], complex_.boundary(2)
    )


def inside_box(point, lo, hi):
    return bool(np.all(point > np.asarray(lo)) and np.all(point < np.asarray(hi)))


def test_section_of_vertical_square():
    tails = np.array([[0, 0, -1], [1, 0, -1], [1, 0, 1], [0, 0, 1]], dtype=float)
    heads = np.roll(tails, -1, axis=0)
    segments = plane_section(tails, heads, np.array([0.0, 1.0, 0.0]), EPS)
    assert segments.tolist() == [[[0.0, 0.0], [1.0, 0.0]]]


def test_section_keeps_edges_in_the_plane():
    segments = plane_section(
        np.array([[0.0, 0.0, 0.0]]), np.array([[1.0, 0.0, 0.0]]), np.array([0.0, 1.0, 0.0]), EPS
    )
    assert segments.tolist() == [[[0.0, 0.0], [1.0, 0.0]]]


def test_section_of_open_chain_is_inconsistent():
    tails = np.array([[0, 0, -1], [0, 0, 0]], dtype=float)
    heads = np.array([[0, 0, 0], [0, 0, 1]], dtype=float)
    with pytest.raises(InconsistentFacetError):
        plane_section(tails, heads, np.array([0.0, 1.0, 0.0]), EPS)


def test_section_misses_plane():
    tails = np.array([[0, 0, 1], [1, 0, 1]], dtype=float)
    heads = np.array([[1, 0, 1], [1, 0, 2]], dtype=float)
    assert plane_section(tails, heads, np.array([0.0, 1.0, 0.0]), EPS).shape == (0, 2, 2)


def test_submanifold_map_flattens_face():
    box = box_complex([0, 0, 5], [1, 2, 6])
    skeleton = spatial_skeleton(box)
    # faces come in (low, high) pairs per axis; face 4 is the bottom at z = 5
    mapping = submanifold_map(skeleton, 4)
    points = box.vertices.coords[list(box.skeletons[2][4])]
    mapped = mapping.apply(points)
    assert mapped[:, 2] == pytest.approx(np.zeros(4))
    assert mapping.invert(mapped) == pytest.approx(points)
    assert mapping.invert(mapped[:, :2]) == pytest.approx(points)
    assert np.linalg.det(mapping.rotation) == pytest.approx(1.0)
    assert mapping.facet == 4


def test_plane_map_is_rigid():
    mapping = plane_map(np.array([1.0, 2.0, 2.0]), np.array([3.0, 0.0, 0.0]))
    rotation = mapping.rotation
    assert rotation @ rotation.T == pytest.approx(np.eye(3))
    assert mapping.apply([[3.0, 0.0, 0.0]])[0, 2] == pytest.approx(0.0)
    assert mapping.matrix @ mapping.inverse == pytest.approx(np.eye(4))


def test_collinear_face_has_no_map():
    vertices = VertexBuffer.from_list([[0, 0, 0], [1, 0, 0], [2, 0, 0]])
    edges = CellArray.from_list(1, [[0, 1], [1, 2], [0, 2]])
    faces = CellArray.from_list(2, [[0, 1, 2]])
    skeleton = Skeleton.spatial(vertices, edges, faces, boundary2(faces, edges))
    with pytest.raises(DegenerateFacetError):
        submanifold_map(skeleton, 0)


def crossed_square():
    coords = [
        [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
        [0.5, -1, -1], [0.5, 2, -1], [0.5, 2, 1], [0.5, -1, 1],
        [-1, 0.5, -1], [2, 0.5, -1], [2, 0.5, 1], [-1, 0.5, 1],
    ]  # fmt: skip
    complex_ = build_complex(
        VertexBuffer.from_list(coords),
        faces=CellArray.from_list(2, [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11]]),
    )
    return spatial_skeleton(complex_)


def test_subdivide_face_by_two_crossing_faces():
    fragment = subdivide_facet(crossed_square(), 0, [1, 2], EPS)
    assert fragment.facet == 0
    assert fragment.n_faces == 4
    assert fragment.vertices.n == 9
    assert len(fragment.edges) == 12
    assert fragment.vertices.coords[:, 2] == pytest.approx(np.zeros(9))
    assert fragment.vertices.coords[:, :2].min() == pytest.approx(0.0)
    assert fragment.vertices.coords[:, :2].max() == pytest.approx(1.0)


def test_subdivide_face_without_candidates():
    fragment = subdivide_facet(crossed_square(), 0, [], EPS)
    assert fragment.n_faces == 1
    assert fragment.vertices.n == 4


def test_derive_edges_follows_the_perimeter():
    vertices = VertexBuffer.from_list([[0, 0], [1, 1], [1, 0], [0, 1]])
    edges = derive_edges(vertices, CellArray.from_list(2, [[0, 1, 2, 3]]))
    assert set(edges.cells) == {(0, 2), (1, 2), (1, 3), (0, 3)}


def test_merge_offset_cubes(unit_cube, offset_cube):
    arrangement = merge([unit_cube, offset_cube], config=RunConfig(jobs=1))
    arrangement.validate()
    assert arrangement.dim == 3
    assert arrangement.n_cells == 3
    assert sorted(arrangement.cell_volumes()) == pytest.approx([0.125, 0.875, 0.875])
    assert arrangement.is_regularized()

    plus = arrangement.boundary_plus().to_dense().astype(int)
    assert np.all(np.abs(plus).sum(axis=1) == 2)
    assert np.all(plus.sum(axis=1) == 0)


def test_merge_locates_sign_vectors(unit_cube, offset_cube):
    arrangement = merge([unit_cube, offset_cube], config=RunConfig(jobs=1))
    volumes = arrangement.cell_volumes()
    rng = np.random.default_rng(5)
    seen = {}
    for point in rng.uniform(-0.2, 1.7, size=(200, 3)):
        key = (inside_box(point, [0] * 3, [1] * 3), inside_box(point, [0.5] * 3, [1.5] * 3))
        cell = arrangement.locate_point(point)
        assert seen.setdefault(key, cell) == cell
    assert seen[(False, False)] is None
    assert len({seen[k] for k in seen if k != (False, False)}) == 3
    assert volumes[seen[(True, True)]] == pytest.approx(0.125)


def test_merge_nested_cubes():
    outer = box_complex([0, 0, 0], [3, 3, 3])
    inner = box_complex([1, 1, 1], [2, 2, 2])
    arrangement = merge([outer, inner], config=RunConfig(jobs=1))
    assert arrangement.n_cells == 2
    assert sorted(arrangement.cell_volumes()) == pytest.approx([1.0, 26.0])
    assert arrangement.tree.depth.tolist() in ([0, 1], [1, 0])
    assert arrangement.locate_point([0.5, 0.5, 0.5]) != arrangement.locate_point([1.5] * 3)


def test_merge_disjoint_cubes(unit_cube):
    far = box_complex([2, 0, 0], [3, 1, 1])
    arrangement = merge([unit_cube, far], config=RunConfig(jobs=1))
    assert arrangement.n_cells == 2
    assert len(arrangement.shells) == 2
    assert arrangement.tree.roots == [0, 1]
    assert sorted(arrangement.cell_volumes()) == pytest.approx([1.0, 1.0])


def test_merge_planar_boxes():
    a = box_complex([0, 0], [1, 1])
    b = box_complex([0.5, 0.5], [1.5, 1.5])
    arrangement = merge([a, b], config=RunConfig(jobs=1))
    assert arrangement.dim == 2
    assert sorted(arrangement.cell_volumes()) == pytest.approx([0.25, 0.75, 0.75])


def test_parallel_merge_is_deterministic(unit_cube, offset_cube):
    serial = merge([unit_cube, offset_cube], config=RunConfig(jobs=1))
    parallel = merge([unit_cube, offset_cube], config=RunConfig(jobs=4, deterministic=True))
    writer = LarWriter()
    assert writer.write(serial) == writer.write(parallel)


def test_merge_rejects_mixed_dimensions(unit_cube):
    with pytest.raises(DimensionMismatchError):
        merge([unit_cube, box_complex([0, 0], [1, 1])])
    with pytest.raises(DimensionMismatchError):
        merge([unit_cube], dim=2)


def test_merge_needs_input():
    with pytest.raises(EmptyInputError):
        merge([])


def cube_with_flap(cube):
    coords = np.vstack([cube.vertices.coords, [[0.5, -1.0, 0.5]]])
    faces = [list(f) for f in cube.skeletons[2]] + [[0, 1, 8]]
    return build_complex(VertexBuffer(coords), faces=CellArray.from_list(2, faces))


def test_prune_dangling_faces(unit_cube):
    skeleton = spatial_skeleton(cube_with_flap(unit_cube))
    pruned, dropped = prune_dangling_faces(skeleton)
    assert pruned.n_facets == 6
    assert pruned.vertices.n == 8
    assert len(pruned.edges) == 12
    assert len(dropped) == 1
    assert dropped[0].shape == (3, 3)


def test_merge_drops_flap(unit_cube):
    arrangement = merge([cube_with_flap(unit_cube)], config=RunConfig(jobs=1))
    assert arrangement.n_cells == 1
    assert len(arrangement.dangling) >= 1
    assert arrangement.cell_volumes() == pytest.approx([1.0])


def test_processor_keeps_input_order():
    processor = FragmentProcessor(jobs=4, deterministic=True)
    assert list(processor.map(lambda x: x * x, range(10))) == [(i, i * i) for i in range(10)]


def test_processor_completion_order_covers_all_items():
    processor = FragmentProcessor(jobs=4, deterministic=False)
    assert sorted(processor.map(lambda x: -x, range(10))) == [(i, -i) for i in range(10)]


def test_processor_records_provenance():
    def fail(x):
        if x == 3:
            raise LarmergeError("bad item")
        return x

    with pytest.raises(LarmergeError) as info:
        list(FragmentProcessor(jobs=1).map(fail, range(5)))
    assert info.value.provenance == 3


def moved(complex_, rotation, shift):
    coords = complex_.vertices.coords @ rotation.T + shift
    return ChainComplex(VertexBuffer(coords), complex_.skeletons, complex_.operators)


def rotation_matrix(dim, rng):
    if dim == 2:
        angle = rng.uniform(0, 2 * np.pi)
        return np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def cell_matching(reference, other, coords):
    """For every cell of ``other`` the index of the cell of ``reference`` on the same points."""
    distance, vertex_map = cKDTree(reference.vertices.coords).query(coords)
    assert distance.max() < 1e-6
    matching = [vertex_map]
    for p in range(1, other.dim + 1):
        lookup = {frozenset(c): k for k, c in enumerate(reference.skeletons[p].cells)}
        keys = [frozenset(vertex_map[list(c)].tolist()) for c in other.skeletons[p].cells]
        matching.append(np.array([lookup[key] for key in keys], dtype=np.int64))
    return matching


def assert_isomorphic(reference, other, coords):
    """Operators agree after matching cells and flipping orientations where needed."""
    assert other.f_vector == reference.f_vector
    matching = cell_matching(reference, other, coords)
    flips = np.ones(other.vertices.n, dtype=np.int64)
    for p in range(1, other.dim + 1):
        expected = reference.boundary(p).to_dense()[np.ix_(matching[p - 1], matching[p])]
        expected = expected.astype(np.int64) * flips[:, None]
        actual = other.boundary(p).to_dense().astype(np.int64)
        flips = np.ones(actual.shape[1], dtype=np.int64)
        for j in range(actual.shape[1]):
            if not np.array_equal(actual[:, j], expected[:, j]):
                assert np.array_equal(actual[:, j], -expected[:, j]), f"{p}-cell {j}"
                flips[j] = -1


@pytest.mark.parametrize("seed", range(3))
def test_rigid_motion_keeps_the_arrangement(seed, unit_cube, offset_cube):
    rng = np.random.default_rng(seed)
    rotation, shift = rotation_matrix(3, rng), rng.uniform(-5, 5, size=3)
    config = RunConfig(jobs=1)
    reference = merge([unit_cube, offset_cube], config=config)
    other = merge([moved(c, rotation, shift) for c in (unit_cube, offset_cube)], config=config)
    assert_isomorphic(reference, other, (other.vertices.coords - shift) @ rotation)
    assert sorted(other.cell_volumes()) == pytest.approx(sorted(reference.cell_volumes()))


@pytest.mark.parametrize("seed", range(3))
def test_rigid_motion_keeps_the_planar_arrangement(seed):
    rng = np.random.default_rng(seed)
    rotation, shift = rotation_matrix(2, rng), rng.uniform(-5, 5, size=2)
    boxes = [box_complex([0, 0], [1, 1]), box_complex([0.5, 0.5], [1.5, 1.5])]
    config = RunConfig(jobs=1)
    reference = merge(boxes, config=config)
    other = merge([moved(c, rotation, shift) for c in boxes], config=config)
    assert_isomorphic(reference, other, (other.vertices.coords - shift) @ rotation)
    assert sorted(other.cell_volumes()) == pytest.approx(sorted(reference.cell_volumes()))


def test_merge_is_idempotent(unit_cube, offset_cube):
    config = RunConfig(jobs=1)
    once = merge([unit_cube, offset_cube], config=config)
    twice = merge([once], config=config)
    assert twice.f_vector == once.f_vector
    assert sorted(twice.cell_volumes()) == pytest.approx(sorted(once.cell_volumes()))
    assert_isomorphic(once, twice, twice.vertices.coords)


def test_planar_merge_is_idempotent():
    config = RunConfig(jobs=1)
    once = merge([box_complex([0, 0], [1, 1]), box_complex([0.5, 0.5], [1.5, 1.5])], config=config)
    twice = merge([once], config=config)
    assert twice.f_vector == once.f_vector
    assert_isomorphic(once, twice, twice.vertices.coords)


def box_union_volume(los, his):
    total = 0.0
    for size in range(1, len(los) + 1):
        for group in itertools.combinations(range(len(los)), size):
            lo = np.max([los[i] for i in group], axis=0)
            hi = np.min([his[i] for i in group], axis=0)
            total += (-1) ** (size + 1) * float(np.prod(np.clip(hi - lo, 0, None)))
    return total


@pytest.mark.parametrize("seed", range(6))
def test_merge_random_boxes(seed):
    rng = np.random.default_rng(seed)
    count = 3 + seed % 2
    los = rng.uniform(0, 2, size=(count, 3))
    his = los + rng.uniform(0.5, 2, size=(count, 3))
    arrangement = merge(
        [box_complex(lo, hi) for lo, hi in zip(los, his)], config=RunConfig(jobs=1)
    )
    arrangement.validate()
    assert arrangement.is_regularized()

    plus = arrangement.boundary_plus().to_dense().astype(int)
    assert np.all(np.abs(plus).sum(axis=1) == 2)
    assert np.all(plus.sum(axis=1) == 0)
    assert np.abs(plus).sum() == 2 * len(arrangement.skeletons[2])
    assert not np.any(arrangement.boundary(2).to_dense().astype(int) @ plus)

    volumes = arrangement.cell_volumes()
    assert np.all(volumes > 0)
    assert volumes.sum() == pytest.approx(box_union_volume(los, his))
