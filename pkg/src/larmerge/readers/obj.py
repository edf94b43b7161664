"""Wavefront OBJ reader: vertices, polygon faces and polylines."""

import logging
from pathlib import Path

from ..chains.cells import CellArray, VertexBuffer
from ..chains.complex import ChainComplex
from ..errors import EmptyInputError, MalformedInputError
from .base import BaseReader, build_complex

logger = logging.getLogger(__name__)


def _index(token: str, n_vertices: int, line: int, column: int) -> int:
    """Resolve a 1-based (or negative, relative) OBJ index, ignoring /vt/vn parts."""
    head = token.split("/")[0]
    try:
        k = int(head)
    except ValueError as e:
        raise MalformedInputError(f"Bad vertex reference {token!r}", line, column) from e
    resolved = k - 1 if k > 0 else n_vertices + k
    if k == 0 or not 0 <= resolved < n_vertices:
        raise MalformedInputError(f"Vertex reference {token} out of range", line, column)
    return resolved


def parse_obj(text: str) -> tuple[VertexBuffer, list[tuple[int, ...]], list[tuple[int, ...]]]:
    """
    Vertices, polygon rings and polylines of an OBJ document.

    Raises:
        MalformedInputError: With line and column of the offending token
    """
    coords: list[list[float]] = []
    rings: list[tuple[int, ...]] = []
    polylines: list[tuple[int, ...]] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = line.split()
        if not tokens:
            continue
        keyword, args = tokens[0], tokens[1:]
        column = raw.index(keyword) + 1
        if keyword == "v":
            if len(args) < 3:
                raise MalformedInputError("Vertex needs three coordinates", number, column)
            try:
                coords.append([float(x) for x in args[:3]])
            except ValueError as e:
                raise MalformedInputError(
                    f"Bad coordinate in {line.strip()!r}", number, column
                ) from e
        elif keyword in ("f", "l"):
            minimum = 3 if keyword == "f" else 2
            if len(args) < minimum:
                raise MalformedInputError(f"'{keyword}' needs {minimum} vertices", number, column)
            refs = tuple(_index(tok, len(coords), number, raw.index(tok) + 1) for tok in args)
            (rings if keyword == "f" else polylines).append(refs)
        else:
            logger.debug(f"Ignoring OBJ record {keyword!r} on line {number}")

    return VertexBuffer.from_list(coords), rings, polylines


class ObjReader(BaseReader):
    """Reader for ``.obj`` files; edges come from face rings and polylines."""

    def read(self, file_path: str) -> ChainComplex:
        vertices, rings, polylines = parse_obj(Path(file_path).read_text(encoding="utf-8"))
        if vertices.n == 0:
            raise EmptyInputError(f"No vertices in {file_path}")

        pairs = [(r[k], r[(k + 1) % len(r)]) for r in rings for k in range(len(r))]
        pairs += [(p[k], p[k + 1]) for p in polylines for k in range(len(p) - 1)]
        edges = CellArray(1, tuple(pairs)) if pairs else None
        faces = CellArray(2, tuple(rings)) if rings else None
        return build_complex(vertices, edges, faces)

    def detect_format(self, file_path: str) -> bool:
        return Path(file_path).suffix.lower() == ".obj"
