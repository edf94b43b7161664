"""LAR document reader (JSON, or Python-literal assignments)."""

import ast
import json
import logging
from pathlib import Path

from pydantic import ValidationError

from ..chains.cells import CellArray, VertexBuffer
from ..chains.complex import ChainComplex
from ..errors import EmptyInputError, MalformedInputError
from ..schemas import CELL_KEYS, LarDocument
from .base import BaseReader, build_complex

logger = logging.getLogger(__name__)


def _parse_literal(text: str) -> dict:
    """``V = [[...]]`` style assignments, one name per statement."""
    try:
        tree = ast.parse(text)
    except SyntaxError as e:
        raise MalformedInputError(f"Invalid LAR text: {e.msg}", e.lineno, e.offset) from e

    data = {}
    for node in tree.body:
        if not (
            isinstance(node, ast.Assign)
            and len(node.targets) == 1
            and isinstance(node.targets[0], ast.Name)
        ):
            raise MalformedInputError(
                "Expected NAME = value assignments", node.lineno, node.col_offset + 1
            )
        try:
            data[node.targets[0].id] = ast.literal_eval(node.value)
        except ValueError as e:
            raise MalformedInputError(
                f"Value of {node.targets[0].id} is not a literal",
                node.value.lineno,
                node.value.col_offset + 1,
            ) from e
    return data


def parse_document(text: str) -> LarDocument:
    """
    Parse LAR JSON, or the Python-literal style, into a document model.

    Raises:
        EmptyInputError: If the document has no vertices
        MalformedInputError: If the text does not parse or does not validate
    """
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise MalformedInputError(f"Invalid JSON: {e.msg}", e.lineno, e.colno) from e
    else:
        data = _parse_literal(text)

    if not isinstance(data, dict):
        raise MalformedInputError("LAR document must be an object")
    if not data.get("V"):
        raise EmptyInputError("Document has no vertices")
    try:
        return LarDocument(**data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(x) for x in first["loc"])
        raise MalformedInputError(f"Invalid LAR document at {location}: {first['msg']}") from e


def document_to_complex(document: LarDocument) -> ChainComplex:
    """Chain complex of a document, canonicalizing its cell arrays."""
    vertices = VertexBuffer.from_list(document.V)
    arrays = {}
    for p, key in enumerate(CELL_KEYS, start=1):
        cells = getattr(document, key)
        if cells is not None:
            arrays[key] = CellArray.from_list(p, cells)
    return build_complex(
        vertices,
        arrays.get("EV"),
        arrays.get("FV"),
        arrays.get("CV"),
        document.operators,
    )


class LarReader(BaseReader):
    """Reader for ``.lar``/``.json`` documents with keys V, EV, FV, CV and operators."""

    def read(self, file_path: str) -> ChainComplex:
        text = Path(file_path).read_text(encoding="utf-8")
        return document_to_complex(parse_document(text))

    def detect_format(self, file_path: str) -> bool:
        path = Path(file_path)
        if path.suffix.lower() in (".lar", ".json"):
            return True
        try:
            with open(path, "r", encoding="utf-8") as f:
                head = f.read(2000).lstrip()
        except (FileNotFoundError, OSError, UnicodeDecodeError):
            return False
        return head.startswith("{") or head.startswith("V")
