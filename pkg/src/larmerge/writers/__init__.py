"""Writers for LAR JSON, SVG, OBJ and Parquet."""

from .base import BaseWriter
from .lar import LarWriter
from .obj import ObjWriter
from .parquet import ParquetWriter, cells_table, triples_table
from .svg import SvgWriter

__all__ = [
    "BaseWriter",
    "LarWriter",
    "ObjWriter",
    "ParquetWriter",
    "SvgWriter",
    "cells_table",
    "triples_table",
]
