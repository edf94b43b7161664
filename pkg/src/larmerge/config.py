"""Configuration models for arrangement runs using Pydantic."""

from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator


class ExportConfig(BaseModel):
    """Options for writing arrangements to disk."""

    format: Literal["lar", "svg", "obj", "parquet"] = Field(
        default="lar",
        description="Output format",
    )

    exploded: float = Field(
        default=1.0,
        ge=1.0,
        le=10.0,
        description="Scale factor pushing 3-cells apart in OBJ output (1.0 = none)",
    )

    float_digits: int = Field(
        default=17,
        ge=6,
        le=17,
        description="Significant digits for coordinates in LAR JSON",
    )

    svg_size: int = Field(
        default=800,
        ge=64,
        le=16384,
        description="Width of the SVG canvas in pixels",
    )

    compression: Literal["snappy", "gzip", "brotli", "lz4", "zstd", "none"] = Field(
        default="snappy",
        description="Parquet compression codec",
    )

    model_config = {"validate_assignment": True, "extra": "forbid"}


class RunConfig(BaseModel):
    """Complete configuration for an arrangement run."""

    epsilon: float = Field(
        default=1e-8,
        gt=0.0,
        lt=1.0,
        description="Merge tolerance relative to the bounding-box diagonal",
    )

    dim: Optional[Literal[2, 3]] = Field(
        default=None,
        description="Embedding dimension (None = infer from the input)",
    )

    jobs: Optional[int] = Field(
        default=None,
        validate_default=True,
        ge=1,
        le=128,
        description="Max parallel workers (None = CPU count)",
    )

    deterministic: bool = Field(
        default=True,
        description="Reduce parallel results in input order",
    )

    parity: bool = Field(
        default=False,
        description="Declare components at odd containment depth void",
    )

    export: ExportConfig = Field(
        default_factory=ExportConfig,
        description="Export configuration",
    )

    @field_validator("jobs")
    @classmethod
    def validate_jobs(cls, v):
        if v is None:
            import os

            return min(32, (os.cpu_count() or 1))
        return v

    model_config = {"validate_assignment": True, "extra": "forbid"}

    def absolute_epsilon(self, coords: np.ndarray) -> float:
        """Convert the relative tolerance into a distance for the given coordinates."""
        coords = np.asarray(coords, dtype=np.float64)
        if coords.size == 0:
            return self.epsilon
        diagonal = float(np.linalg.norm(coords.max(axis=0) - coords.min(axis=0)))
        return self.epsilon * diagonal if diagonal > 0.0 else self.epsilon

    def to_dict(self):
        return self.model_dump(exclude_unset=True)

    @classmethod
    def from_yaml(cls, path: Path):
        import yaml

        with open(path) as f:
            return cls(**(yaml.safe_load(f) or {}))

    def save_yaml(self, path: Path):
        import yaml

        with open(path, "w") as f:
            yaml.dump(self.model_dump(), f)

    @classmethod
    def preset(cls, name: str) -> "RunConfig":
        """Named presets offered by ``larmerge config``."""
        config = cls()
        if name == "precise":
            config.epsilon = 1e-10
            config.deterministic = True
            config.jobs = 1
        elif name == "fast":
            config.epsilon = 1e-7
            config.deterministic = False
        elif name != "default":
            raise ValueError(f"Unknown preset: {name}")
        return config
