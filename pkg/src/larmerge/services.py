"""Service layer for business logic separation."""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from .chains.complex import ChainComplex
from .chains.operators import Chain, adjacency, apply
from .config import ExportConfig, RunConfig
from .errors import DimensionMismatchError, MalformedInputError, UnsupportedFormatError
from .pipeline.merge import Arrangement, merge
from .readers import LarReader, ObjReader
from .readers.base import BaseReader
from .shells.components import facet_components
from .writers import LarWriter, ObjWriter, ParquetWriter, SvgWriter
from .writers.base import BaseWriter

logger = logging.getLogger(__name__)

# letters of the adjacency relations, by cell dimension
CELL_LETTERS = {"V": 0, "E": 1, "F": 2, "C": 3, "T": 3}


class ReaderFactory:
    """Factory for creating reader instances."""

    @staticmethod
    def create_reader(format_type: str) -> BaseReader:
        """
        Create a reader instance based on format type.

        Args:
            format_type: Type of reader ("lar", "obj")

        Returns:
            Reader instance

        Raises:
            UnsupportedFormatError: If format_type is not supported
        """
        readers = {
            "lar": LarReader,
            "obj": ObjReader,
        }

        reader_class = readers.get(format_type.lower())
        if not reader_class:
            raise UnsupportedFormatError(f"Unsupported input format: {format_type}")

        return reader_class()

    @staticmethod
    def auto_detect_format(file_path: Union[str, Path]) -> str:
        """
        Auto-detect the input format from the file name or content.

        Args:
            file_path: Path to the input file

        Returns:
            Detected format type ("lar" or "obj")
        """
        file_path = Path(file_path)

        if ObjReader().detect_format(str(file_path)):
            return "obj"
        if LarReader().detect_format(str(file_path)):
            return "lar"

        logger.debug(f"No format detected for {file_path}, assuming LAR")
        return "lar"


class WriterFactory:
    """Factory for creating writer instances."""

    @staticmethod
    def create_writer(format_type: str, config: Optional[ExportConfig] = None) -> BaseWriter:
        """
        Create a writer instance based on format type.

        Args:
            format_type: Type of writer ("lar", "svg", "obj", "parquet")
            config: Export options shared by all writers

        Returns:
            Configured writer instance

        Raises:
            UnsupportedFormatError: If format_type is not supported
        """
        writers = {
            "lar": LarWriter,
            "svg": SvgWriter,
            "obj": ObjWriter,
            "parquet": ParquetWriter,
        }

        writer_class = writers.get(format_type.lower())
        if not writer_class:
            raise UnsupportedFormatError(f"Unsupported output format: {format_type}")

        return writer_class(config)


class ArrangementService:
    """Service for loading, arranging and exporting complexes."""

    def __init__(self, config: Optional[RunConfig] = None):
        """Initialize arrangement service with configuration."""
        self.config = config or RunConfig()

    def load(self, input_file: Path, format_type: str = "auto") -> ChainComplex:
        """
        Read one input file into a canonical chain complex.

        Args:
            input_file: Path to a LAR document or OBJ mesh
            format_type: Format type or "auto" for detection

        Returns:
            Chain complex with assembled operators
        """
        if format_type == "auto":
            format_type = ReaderFactory.auto_detect_format(input_file)

        reader = ReaderFactory.create_reader(format_type)
        complex_ = reader.read(str(input_file))
        logger.info(f"Loaded {input_file} as {reader.get_format_name()}: f={complex_.f_vector}")
        return complex_

    def arrange(self, input_files: Sequence[Path], dim: Optional[int] = None) -> Arrangement:
        """
        Merge the complexes of several files into one arrangement.

        Args:
            input_files: Files to load
            dim: Embedding dimension, or None to use the configured or inferred one

        Returns:
            The regularized arrangement
        """
        complexes = [self.load(path) for path in input_files]
        return merge(complexes, dim, self.config)

    def export(
        self,
        complex_: ChainComplex,
        output: Optional[Path] = None,
        format_type: Optional[str] = None,
    ) -> bytes:
        """
        Encode a complex and optionally write it to disk.

        Parquet output writes the operator triples to ``output`` and the cell
        table next to it as ``<stem>.cells.parquet``.

        Args:
            complex_: Complex or arrangement to export
            output: Destination file, or None to only encode
            format_type: Output format (defaults to the configured one)

        Returns:
            Encoded content of the main output
        """
        format_type = format_type or self.config.export.format
        writer = WriterFactory.create_writer(format_type, self.config.export)
        data = writer.write(complex_)

        if output is not None:
            output = Path(output)
            output.write_bytes(data)
            logger.info(f"Wrote {len(data)} bytes of {writer.get_format_name()} to {output}")
            if isinstance(writer, ParquetWriter):
                sidecar = output.with_name(f"{output.stem}.cells.parquet")
                sidecar.write_bytes(writer.write_cells(complex_))
                logger.info(f"Wrote cell table to {sidecar}")

        return data


class ChainService:
    """Service for chain and adjacency queries on a loaded complex."""

    @staticmethod
    def boundary(complex_: ChainComplex, dim: int, chain_text: str, mod2: bool = False) -> Chain:
        """
        Boundary of a chain given as "(+|-)index" tokens.

        Args:
            complex_: Complex whose operator is applied
            dim: Dimension p of the chain (1..d)
            chain_text: Token list such as "1,-2,4"
            mod2: Reduce coefficients modulo 2

        Returns:
            The (p-1)-chain
        """
        if not 1 <= dim <= complex_.dim:
            raise DimensionMismatchError(
                f"No boundary operator of dimension {dim} in a {complex_.dim}-complex"
            )
        op = complex_.boundary(dim)
        chain = Chain.from_tokens(chain_text, dim, op.shape[1], signed=not mod2)
        return apply(op, chain, "mod2" if mod2 else "signed")

    @staticmethod
    def default_threshold(p: int, q: int) -> int:
        """
        Shared vertices that relate a p-cell and a q-cell of a simplicial complex.

        Two p-cells are adjacent when they share p vertices (vertices are
        related through a common edge). A lower cell is incident to a higher
        one when all of its min(p, q) + 1 vertices are shared.
        """
        if p == q:
            return max(p, 1)
        return min(p, q) + 1

    @staticmethod
    def adjacency(
        complex_: ChainComplex,
        relation: str,
        threshold: Optional[int] = None,
        at_least: bool = False,
    ) -> List[List[int]]:
        """
        Adjacency or incidence lists between two kinds of cells.

        Args:
            complex_: Complex to query
            relation: Two letters out of V, E, F, C (T is a synonym of C), e.g. "VV", "TT", "EF"
            threshold: Shared vertices required (default by dimensions)
            at_least: Keep pairs sharing at least ``threshold`` vertices

        Returns:
            Per-cell sorted lists of related cells
        """
        relation = relation.upper()
        if len(relation) != 2 or any(c not in CELL_LETTERS for c in relation):
            raise MalformedInputError(f"Unknown relation {relation!r}, expected e.g. VV, EE, TT")
        p, q = (CELL_LETTERS[c] for c in relation)
        if max(p, q) > complex_.dim:
            raise DimensionMismatchError(
                f"Relation {relation} needs {max(p, q)}-cells in a {complex_.dim}-complex"
            )
        if threshold is None:
            threshold = ChainService.default_threshold(p, q)

        n = complex_.vertices.n
        if p == q == 0:
            # vertices sharing an edge
            m1t = complex_.skeletons[1].characteristic_matrix(n).T
            return adjacency(m1t, m1t, threshold, at_least=at_least)
        mp = complex_.skeletons[p].characteristic_matrix(n)
        mq = mp if p == q else complex_.skeletons[q].characteristic_matrix(n)
        return adjacency(mp, mq, threshold, at_least=at_least)


class StatsService:
    """Service for statistics and analysis."""

    @staticmethod
    def get_complex_stats(complex_: ChainComplex) -> dict:
        """
        Get statistics for a complex or arrangement.

        Args:
            complex_: Complex to describe

        Returns:
            Dictionary with statistics
        """
        names = ["V", "E", "F", "C3"]
        f_vector = complex_.f_vector
        # connectivity of the (d-1)-skeleton, the edges of a 1-complex
        layer = complex_.skeletons[max(complex_.dim - 1, 1)] if complex_.dim > 0 else None
        stats = {
            "dim": complex_.dim,
            "f_vector": dict(zip(names, f_vector)),
            "euler": complex_.euler_characteristic(),
            "regularized": complex_.is_regularized(),
            "components": len(facet_components(layer, complex_.vertices.n))
            if layer is not None
            else complex_.vertices.n,
        }

        if isinstance(complex_, Arrangement):
            stats["shells"] = len(complex_.shells)
            if complex_.n_cells:
                volumes = np.abs(complex_.cell_volumes())
                stats["total_measure"] = float(volumes.sum())
            stats["dangling"] = len(complex_.dangling)

        return stats

    @staticmethod
    def summary_line(stats: dict) -> str:
        """The f-vector as ``V=8 E=12 F=6 C3=1``."""
        return " ".join(f"{name}={count}" for name, count in stats["f_vector"].items())
