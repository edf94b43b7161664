"""Per-axis interval trees answering box-overlap queries."""

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from intervaltree import IntervalTree

from ..errors import DimensionMismatchError, UnknownCellError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BoxSet:
    """Closed axis-aligned containment boxes, one per cell."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lo, dtype=np.float64)
        hi = np.array(self.hi, dtype=np.float64)
        if lo.ndim != 2 or lo.shape != hi.shape:
            raise DimensionMismatchError(f"Box bounds differ in shape: {lo.shape} vs {hi.shape}")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("Box bounds must be finite")
        if np.any(lo > hi):
            raise ValueError("Box lower bound exceeds upper bound")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def from_cells(cls, coords: np.ndarray, cells: Iterable[Sequence[int]]) -> "BoxSet":
        """Boxes of cells given as vertex index lists."""
        coords = np.asarray(coords, dtype=np.float64)
        lo, hi = [], []
        for cell in cells:
            pts = coords[list(cell)]
            lo.append(pts.min(axis=0))
            hi.append(pts.max(axis=0))
        d = coords.shape[1] if coords.ndim == 2 else 0
        return cls(np.array(lo).reshape(-1, d), np.array(hi).reshape(-1, d))

    @classmethod
    def from_point_sets(cls, point_sets: Iterable[np.ndarray]) -> "BoxSet":
        sets = [np.asarray(p, dtype=np.float64) for p in point_sets]
        if not sets:
            return cls(np.zeros((0, 2)), np.zeros((0, 2)))
        lo = np.array([p.min(axis=0) for p in sets])
        return cls(lo, np.array([p.max(axis=0) for p in sets]))

    def __len__(self) -> int:
        return self.lo.shape[0]

    @property
    def dim(self) -> int:
        return self.lo.shape[1]

    def padded(self, eps: float) -> "BoxSet":
        return BoxSet(self.lo - eps, self.hi + eps)

    def overlaps(self, i: int, j: int) -> bool:
        return bool(np.all(self.lo[i] <= self.hi[j]) and np.all(self.lo[j] <= self.hi[i]))


def _half_open_end(hi: float) -> float:
    # closed [lo, hi] becomes half-open [lo, next float after hi)
    return float(np.nextafter(hi, np.inf))


class IntervalIndex:
    """One balanced interval tree per coordinate axis over a box set."""

    def __init__(self, boxes: BoxSet):
        self.boxes = boxes
        self.trees = [
            IntervalTree.from_tuples(
                (float(boxes.lo[i, axis]), _half_open_end(boxes.hi[i, axis]), i)
                for i in range(len(boxes))
            )
            for axis in range(boxes.dim)
        ]
        logger.debug(f"Built interval index over {len(boxes)} boxes in {boxes.dim}D")

    def __len__(self) -> int:
        return len(self.boxes)

    def query_axis(self, axis: int, lo: float, hi: float) -> set[int]:
        """Boxes whose closed interval on ``axis`` meets the closed interval [lo, hi]."""
        return {iv.data for iv in self.trees[axis].overlap(float(lo), _half_open_end(hi))}

    def query_box(self, lo: Sequence[float], hi: Sequence[float]) -> set[int]:
        """Intersection of the per-axis query sets."""
        result: set[int] | None = None
        for axis in range(len(self.trees)):
            hits = self.query_axis(axis, lo[axis], hi[axis])
            result = hits if result is None else result & hits
            if not result:
                return set()
        return result or set()

    def possible_intersections(self, cell: int) -> set[int]:
        """
        Cells whose boxes overlap the box of ``cell``, excluding itself.

        Raises:
            UnknownCellError: If ``cell`` is not indexed
        """
        if not 0 <= cell < len(self.boxes):
            raise UnknownCellError(f"Cell {cell} is not in the index", provenance=cell)
        hits = self.query_box(self.boxes.lo[cell], self.boxes.hi[cell])
        hits.discard(cell)
        return hits


def build_index(boxes: BoxSet) -> IntervalIndex:
    return IntervalIndex(boxes)


def possible_intersections(index: IntervalIndex, cell: int) -> set[int]:
    return index.possible_intersections(cell)
