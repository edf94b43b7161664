"""Readers for LAR documents and OBJ meshes."""

from .base import BaseReader, build_complex
from .lar import LarReader, document_to_complex, parse_document
from .obj import ObjReader, parse_obj

__all__ = [
    "BaseReader",
    "LarReader",
    "ObjReader",
    "build_complex",
    "document_to_complex",
    "parse_document",
    "parse_obj",
]
