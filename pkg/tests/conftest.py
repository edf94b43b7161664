"""Shared complexes used across the test suite."""

import numpy as np
import pytest

from larmerge.chains.cells import CellArray, VertexBuffer
from larmerge.chains.complex import Skeleton
from larmerge.pipeline.merge import box_complex
from larmerge.readers.base import build_complex

# A unit right triangle cut into three faces
TRIANGLE_V = [[1, 1], [0.5, 0.5], [1, 0.5], [0, 0], [0.5, 0], [1, 0]]
TRIANGLE_EV = [[0, 1], [0, 2], [1, 2], [1, 3], [1, 4], [2, 5], [3, 4], [4, 5]]
TRIANGLE_FV = [[0, 1, 2], [1, 3, 4], [1, 2, 4, 5]]
# edges x faces
TRIANGLE_D2 = [
    [1, 0, 0],
    [-1, 0, 0],
    [1, 0, -1],
    [0, 1, 0],
    [0, -1, 1],
    [0, 0, -1],
    [0, 1, 0],
    [0, 0, 1],
]

# Unit square with holes and notches: 22 vertices, 34 edges, 13 faces
GRID_V = [
    [0.5, 0.2475], [0.5, 0.0], [0.5, 0.7525], [0.7525, 0.0], [0.0, 0.0],
    [0.7525, 0.7475], [0.8787, 0.5], [0.0, 0.5], [0.2475, 0.7525], [0.5, 0.5],
    [0.2475, 0.0], [0.8787, 0.2475], [0.2475, 0.5], [0.2475, 0.2475], [0.7525, 0.2475],
    [1.0, 0.5], [0.0, 1.0], [0.7525, 0.5], [0.5, 1.0], [1.0, 0.0],
    [1.0, 0.2475], [0.2475, 1.0],
]  # fmt: skip
GRID_EV = [
    [5, 15], [5, 17], [5, 18], [6, 15], [15, 20], [6, 17], [11, 20], [11, 14], [6, 11],
    [3, 19], [19, 20], [3, 14], [1, 3], [14, 17], [0, 14], [9, 17], [2, 18], [18, 21],
    [2, 9], [8, 21], [8, 12], [2, 8], [16, 21], [7, 16], [0, 1], [1, 10], [0, 9],
    [12, 13], [10, 13], [0, 13], [7, 12], [4, 10], [4, 7], [9, 12],
]  # fmt: skip
GRID_FV = [
    [5, 6, 15, 17], [2, 5, 9, 17, 18], [6, 11, 15, 20], [6, 11, 14, 17],
    [3, 11, 14, 19, 20], [0, 1, 3, 14], [0, 9, 14, 17], [2, 8, 18, 21], [2, 8, 9, 12],
    [7, 8, 12, 16, 21], [0, 1, 10, 13], [0, 9, 12, 13], [4, 7, 10, 12, 13],
]  # fmt: skip
GRID_VV = [
    [1, 9, 13, 14], [0, 3, 10], [8, 9, 18], [1, 14, 19], [7, 10], [15, 17, 18],
    [11, 15, 17], [4, 12, 16], [2, 12, 21], [0, 2, 12, 17], [1, 4, 13], [6, 14, 20],
    [7, 8, 9, 13], [0, 10, 12], [0, 3, 11, 17], [5, 6, 20], [7, 21], [5, 6, 9, 14],
    [2, 5, 21], [3, 20], [11, 15, 19], [8, 16, 18],
]  # fmt: skip
# Rows of the transposed boundary of the 2-cells, up to orientation
GRID_FACE_BOUNDARIES = [
    {0: -1, 1: 1, 3: 1, 5: -1},
    {1: -1, 2: 1, 15: 1, 16: -1, 18: 1},
    {3: 1, 4: 1, 6: -1, 8: -1},
    {5: -1, 7: 1, 8: 1, 13: 1},
    {6: 1, 7: -1, 9: -1, 10: -1, 11: 1},
    {11: 1, 12: 1, 14: -1, 24: 1},
    {13: 1, 14: 1, 15: -1, 26: -1},
    {16: 1, 17: 1, 19: -1, 21: -1},
    {18: -1, 20: 1, 21: 1, 33: -1},
    {19: 1, 20: -1, 22: -1, 23: -1, 30: 1},
    {24: -1, 25: -1, 28: -1, 29: 1},
    {26: 1, 27: 1, 29: -1, 33: 1},
    {27: -1, 28: 1, 30: -1, 31: 1, 32: -1},
]

# Tetrahedral mesh of a 3 x 2 x 1 block; vertex 12z + 4y + x
TETRA_TV = [
    [0, 1, 4, 12], [1, 4, 12, 13], [4, 12, 13, 16], [1, 4, 5, 13], [4, 5, 13, 16],
    [5, 13, 16, 17], [1, 2, 5, 13], [2, 5, 13, 14], [5, 13, 14, 17], [2, 5, 6, 14],
    [5, 6, 14, 17], [6, 14, 17, 18], [2, 3, 6, 14], [3, 6, 14, 15], [6, 14, 15, 18],
    [3, 6, 7, 15], [6, 7, 15, 18], [7, 15, 18, 19], [4, 5, 8, 16], [5, 8, 16, 17],
    [8, 16, 17, 20], [5, 8, 9, 17], [8, 9, 17, 20], [9, 17, 20, 21], [5, 6, 9, 17],
    [6, 9, 17, 18], [9, 17, 18, 21], [6, 9, 10, 18], [9, 10, 18, 21], [10, 18, 21, 22],
    [6, 7, 10, 18], [7, 10, 18, 19], [10, 18, 19, 22], [7, 10, 11, 19], [10, 11, 19, 22],
    [11, 19, 22, 23],
]  # fmt: skip
TETRA_TT = [
    [1], [0, 2, 3], [1, 4], [1, 4, 6], [2, 3, 5, 18], [4, 8, 19], [3, 7], [6, 8, 9],
    [5, 7, 10], [7, 10, 12], [8, 9, 11, 24], [10, 14, 25], [9, 13], [12, 14, 15],
    [11, 13, 16], [13, 16], [14, 15, 17, 30], [16, 31], [4, 19], [5, 18, 20, 21],
    [19, 22], [19, 22, 24], [20, 21, 23], [22, 26], [10, 21, 25], [11, 24, 26, 27],
    [23, 25, 28], [25, 28, 30], [26, 27, 29], [28, 32], [16, 27, 31], [17, 30, 32, 33],
    [29, 31, 34], [31, 34], [32, 33, 35], [34],
]  # fmt: skip

# Planar graph with a dangling chain and a detached triangle
STAR_V = [
    [0, 2], [-1, 1], [-1, 0], [-1, -1], [0, -1], [1, 2], [1, -1], [3, 0.5],
    [10, 10], [11, 10], [10, 11], [0, 0], [0, 1], [2, 0.5], [1, 0], [1, 1],
]  # fmt: skip
STAR_EV = [
    [5, 15], [6, 14], [7, 13], [8, 9], [8, 10], [9, 10], [0, 5], [13, 15], [13, 14],
    [1, 2], [12, 15], [0, 12], [11, 12], [1, 12], [2, 11], [3, 11], [4, 11], [11, 14],
]  # fmt: skip

# Nested squares (lo, hi); component k is square k
SQUARES = [
    ((1, 1), (3, 3)),
    ((5, 1), (13, 9)),
    ((0, 0), (20, 20)),
    ((1, 15), (3, 17)),
    ((14, 12), (19, 19)),
    ((15, 14), (17, 16)),
    ((8, 4), (10, 6)),
    ((6, 2), (12, 8)),
]


def square_segments(lo, hi):
    (x0, y0), (x1, y1) = lo, hi
    corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    return [[corners[k], corners[(k + 1) % 4]] for k in range(4)]


@pytest.fixture
def triangle_complex():
    return build_complex(
        VertexBuffer.from_list(TRIANGLE_V),
        CellArray.from_list(1, TRIANGLE_EV),
        CellArray.from_list(2, TRIANGLE_FV),
    )


@pytest.fixture
def grid_complex():
    return build_complex(
        VertexBuffer.from_list(GRID_V),
        CellArray.from_list(1, GRID_EV),
        CellArray.from_list(2, GRID_FV),
    )


@pytest.fixture
def tetra_vertices():
    return VertexBuffer(
        np.array([[x, y, z] for z in range(2) for y in range(3) for x in range(4)], dtype=float)
    )


@pytest.fixture
def star_skeleton():
    return Skeleton.planar(VertexBuffer.from_list(STAR_V), CellArray.from_list(1, STAR_EV))


@pytest.fixture
def squares_skeleton():
    coords, edges = [], []
    for k, ((x0, y0), (x1, y1)) in enumerate(SQUARES):
        coords += [[x0, y0], [x1, y0], [x1, y1], [x0, y1]]
        b = 4 * k
        edges += [[b, b + 1], [b + 1, b + 2], [b + 2, b + 3], [b, b + 3]]
    return Skeleton.planar(VertexBuffer.from_list(coords), CellArray.from_list(1, edges))


@pytest.fixture
def unit_cube():
    return box_complex([0, 0, 0], [1, 1, 1])


@pytest.fixture
def offset_cube():
    return box_complex([0.5, 0.5, 0.5], [1.5, 1.5, 1.5])


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "triangle.lar"
    path.write_text(f"V = {TRIANGLE_V}\nEV = {TRIANGLE_EV}\nFV = {TRIANGLE_FV}\n")
    return path


@pytest.fixture
def cube_obj(tmp_path):
    def write(name, lo, hi):
        (x0, y0, z0), (x1, y1, z1) = lo, hi
        lines = [
            f"v {x} {y} {z}" for z in (z0, z1) for y in (y0, y1) for x in (x0, x1)
        ]
        lines += [
            "f 1 3 4 2",
            "f 5 6 8 7",
            "f 1 2 6 5",
            "f 3 7 8 4",
            "f 1 5 7 3",
            "f 2 4 8 6",
        ]
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n")
        return path

    return write
