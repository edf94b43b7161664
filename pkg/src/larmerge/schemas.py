"""Document model for LAR JSON and PyArrow schemas for columnar export."""

import json
from typing import Dict, List, Optional

import pyarrow as pa
from pydantic import BaseModel, Field, field_validator

from .chains.complex import ChainComplex

OPERATOR_NAMES = ("d1", "d2", "d3")
CELL_KEYS = ("EV", "FV", "CV")


TRIPLES_SCHEMA = pa.schema(
    [
        pa.field("operator", pa.string(), nullable=False),
        pa.field("row", pa.int64(), nullable=False),
        pa.field("col", pa.int64(), nullable=False),
        pa.field("coeff", pa.int8(), nullable=False),
    ]
)

CELLS_SCHEMA = pa.schema(
    [
        pa.field("dim", pa.int8(), nullable=False),
        pa.field("cell", pa.int64(), nullable=False),
        pa.field("vertices", pa.list_(pa.int64()), nullable=False),
        pa.field("coords", pa.list_(pa.float64()), nullable=True),
    ]
)


class LarDocument(BaseModel):
    """Readable LAR: vertex coordinates, cell vertex lists and signed operators."""

    V: List[List[float]]
    EV: Optional[List[List[int]]] = None
    FV: Optional[List[List[int]]] = None
    CV: Optional[List[List[int]]] = None
    operators: Dict[str, List[List[int]]] = Field(default_factory=dict)

    model_config = {"extra": "forbid"}

    @field_validator("operators")
    @classmethod
    def validate_operators(cls, v):
        for name, triples in v.items():
            if name not in OPERATOR_NAMES:
                raise ValueError(f"Unknown operator {name!r}, expected one of {OPERATOR_NAMES}")
            if any(len(t) != 3 for t in triples):
                raise ValueError(f"Operator {name} must be a list of [row, col, coeff] triples")
        return v

    @property
    def dim(self) -> int:
        """Dimension of the highest cells present."""
        for p, key in zip((3, 2, 1), reversed(CELL_KEYS)):
            if getattr(self, key) is not None:
                return p
        return 0

    @classmethod
    def from_complex(
        cls, complex_: ChainComplex, float_digits: int = 17, operators: bool = True
    ) -> "LarDocument":
        coords = [[float(f"{x:.{float_digits}g}") for x in row] for row in complex_.vertices.coords]
        data = {"V": coords}
        for p, key in enumerate(CELL_KEYS, start=1):
            if p <= complex_.dim:
                data[key] = complex_.skeletons[p].to_list()
        if operators:
            data["operators"] = {
                f"d{p}": [list(t) for t in complex_.boundary(p).triples()]
                for p in range(1, complex_.dim + 1)
            }
        return cls(**data)

    def to_json(self) -> str:
        """Byte-stable JSON with sorted keys and one top-level key per line."""
        data = self.model_dump(exclude_none=True)
        if not data.get("operators"):
            data.pop("operators", None)
        lines = [
            f"  {json.dumps(key)}: {json.dumps(data[key], sort_keys=True)}" for key in sorted(data)
        ]
        return "{\n" + ",\n".join(lines) + "\n}\n"
