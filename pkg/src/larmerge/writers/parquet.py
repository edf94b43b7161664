"""Columnar export of operators and cells with PyArrow."""

import logging

import pyarrow as pa
import pyarrow.parquet as pq

from ..chains.complex import ChainComplex
from ..schemas import CELLS_SCHEMA, TRIPLES_SCHEMA
from .base import BaseWriter

logger = logging.getLogger(__name__)


def triples_table(complex_: ChainComplex) -> pa.Table:
    """Every boundary operator as (operator, row, col, coeff) rows."""
    columns = {"operator": [], "row": [], "col": [], "coeff": []}
    for p in range(1, complex_.dim + 1):
        for i, j, a in complex_.boundary(p).triples():
            columns["operator"].append(f"d{p}")
            columns["row"].append(i)
            columns["col"].append(j)
            columns["coeff"].append(a)
    return pa.Table.from_pydict(columns, schema=TRIPLES_SCHEMA)


def cells_table(complex_: ChainComplex) -> pa.Table:
    """Every cell as (dim, cell, vertices); vertices also carry coordinates."""
    columns = {"dim": [], "cell": [], "vertices": [], "coords": []}
    coords = complex_.vertices.coords
    for p, cells in enumerate(complex_.skeletons):
        for k, cell in enumerate(cells):
            columns["dim"].append(p)
            columns["cell"].append(k)
            columns["vertices"].append(list(cell))
            columns["coords"].append(coords[k].tolist() if p == 0 else None)
    return pa.Table.from_pydict(columns, schema=CELLS_SCHEMA)


class ParquetWriter(BaseWriter):
    """Operator triples as Parquet; the cell table is written as a sidecar file."""

    def _encode(self, table: pa.Table) -> bytes:
        sink = pa.BufferOutputStream()
        compression = None if self.config.compression == "none" else self.config.compression
        pq.write_table(table, sink, compression=compression)
        return sink.getvalue().to_pybytes()

    def write(self, complex_: ChainComplex) -> bytes:
        table = triples_table(complex_)
        logger.debug(f"Parquet triples table with {table.num_rows} rows")
        return self._encode(table)

    def write_cells(self, complex_: ChainComplex) -> bytes:
        return self._encode(cells_table(complex_))
