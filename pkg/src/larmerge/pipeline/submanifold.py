"""Rigid motions taking a facet's supporting plane onto x3 = 0."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..chains.complex import Skeleton
from ..chains.geometry import canonical_sign, plane_frame
from ..errors import DegenerateFacetError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SubmanifoldMap:
    """Homogeneous 4x4 matrix of a rigid motion and its inverse."""

    matrix: np.ndarray
    inverse: np.ndarray
    facet: Optional[int] = None

    @property
    def rotation(self) -> np.ndarray:
        return self.matrix[:3, :3]

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map 3D points into the facet frame."""
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return points @ self.rotation.T + self.matrix[:3, 3]

    def invert(self, points: np.ndarray) -> np.ndarray:
        """Map frame points back to world coordinates; 2D points are lifted to z = 0."""
        points = np.asarray(points, dtype=np.float64)
        if points.ndim == 2 and points.shape[1] == 2:
            points = np.column_stack([points, np.zeros(len(points))])
        return points.reshape(-1, 3) @ self.inverse[:3, :3].T + self.inverse[:3, 3]


def plane_map(
    normal: np.ndarray, origin: np.ndarray, facet: Optional[int] = None
) -> SubmanifoldMap:
    """
    Rigid motion taking the plane through ``origin`` with ``normal`` to x3 = 0.

    Raises:
        DegenerateFacetError: If the normal vanishes
    """
    frame = plane_frame(canonical_sign(np.asarray(normal, dtype=np.float64)))
    offset = float(frame[2] @ np.asarray(origin, dtype=np.float64))

    matrix = np.eye(4)
    matrix[:3, :3] = frame
    matrix[2, 3] = -offset
    inverse = np.eye(4)
    inverse[:3, :3] = frame.T
    inverse[:3, 3] = frame.T @ np.array([0.0, 0.0, offset])
    return SubmanifoldMap(matrix, inverse, facet)


def submanifold_map(skeleton: Skeleton, facet: int, tol: float = 1e-12) -> SubmanifoldMap:
    """
    Submanifold map of one face of a 3D skeleton.

    The plane normal is the face's vector area, so non-convex faces and
    faces with holes are handled like convex ones.

    Raises:
        DegenerateFacetError: If the face vertices are collinear
    """
    area = skeleton.facet_areas[facet]
    coords = skeleton.vertices.coords[list(skeleton.faces[facet])]
    extent = float(np.linalg.norm(coords.max(axis=0) - coords.min(axis=0)))
    if float(np.linalg.norm(area)) <= tol * max(extent, 1.0) ** 2:
        raise DegenerateFacetError(f"Face {facet} has collinear vertices", provenance=facet)
    return plane_map(area, skeleton.facet_anchor[facet], facet)
