"""larmerge - Regularized arrangements of the plane and space from cellular complexes."""

__version__ = "0.1.0"

from .main import (
    load,
    export,
)
from .chains import (
    CellArray,
    Chain,
    ChainComplex,
    SignedOperator,
    Skeleton,
    VertexBuffer,
    adjacency,
    apply,
    boundary1,
    boundary2,
    boundary3,
    coboundary,
)
from .config import ExportConfig, RunConfig
from .errors import GeometryError, InputError, LarmergeError
from .pipeline import (
    Arrangement,
    arrange_segments,
    box_complex,
    locate_point,
    merge,
)
from .readers import LarReader, ObjReader
from .writers import LarWriter, ObjWriter, ParquetWriter, SvgWriter
from . import schemas

__all__ = [
    "load",
    "export",
    "schemas",
    # Readers and Writers for dependency injection
    "LarReader",
    "ObjReader",
    "LarWriter",
    "ObjWriter",
    "ParquetWriter",
    "SvgWriter",
    # Chain complexes
    "CellArray",
    "Chain",
    "ChainComplex",
    "SignedOperator",
    "Skeleton",
    "VertexBuffer",
    "adjacency",
    "apply",
    "boundary1",
    "boundary2",
    "boundary3",
    "coboundary",
    # Arrangements
    "Arrangement",
    "arrange_segments",
    "box_complex",
    "locate_point",
    "merge",
    # Configuration
    "ExportConfig",
    "RunConfig",
    # Errors
    "GeometryError",
    "InputError",
    "LarmergeError",
]
