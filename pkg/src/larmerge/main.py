"""Main API for loading complexes and exporting arrangements."""

import logging
from pathlib import Path
from typing import Optional

from .chains.complex import ChainComplex
from .readers import BaseReader, LarReader, ObjReader
from .writers import BaseWriter

logger = logging.getLogger(__name__)


def load(file_path: str, reader: Optional[BaseReader] = None) -> ChainComplex:
    """
    Load a LAR document or OBJ mesh into a canonical chain complex.

    Args:
        file_path: Path to the input file
        reader: Configured reader instance (e.g., LarReader()); chosen from the file if None

    Returns:
        Chain complex with vertices, cell arrays and signed boundary operators
    """
    file_path = str(Path(file_path).resolve())

    if reader is None:
        reader = ObjReader() if ObjReader().detect_format(file_path) else LarReader()
    elif not reader.detect_format(file_path):
        logger.warning(f"Reader {reader.get_format_name()} may not support file: {file_path}")

    return reader.read(file_path)


def export(complex_: ChainComplex, writer: BaseWriter) -> bytes:
    """
    Encode a complex or arrangement using provided writer instance.

    Args:
        complex_: Complex to export
        writer: Configured writer instance (e.g., SvgWriter(ExportConfig(svg_size=400)))

    Returns:
        Encoded file content
    """
    return writer.write(complex_)
