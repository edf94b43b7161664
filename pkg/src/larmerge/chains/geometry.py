"""Small vector helpers shared by the operator builders and the facet pipeline."""

import numpy as np

from ..errors import DegenerateFacetError


def shoelace(points: np.ndarray) -> float:
    """Signed area of a closed 2D polygon given by its vertex sequence."""
    x, y = points[:, 0], points[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def newell_normal(points: np.ndarray) -> np.ndarray:
    """Vector area of a closed 3D polygon; its length is the polygon area."""
    nxt = np.roll(points, -1, axis=0)
    return 0.5 * np.cross(points, nxt).sum(axis=0)


def canonical_sign(normal: np.ndarray) -> np.ndarray:
    """Flip a normal so that its largest-magnitude component is positive."""
    k = int(np.argmax(np.abs(normal)))
    return -normal if normal[k] < 0 else normal


def plane_frame(normal: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """
    Orthonormal rows (e1, e2, e3) with e3 along the normal.

    e1 is the projection of the x axis on the plane, or of the y axis when
    the plane is normal to x, so axis-aligned planes get axis-aligned frames.

    Raises:
        DegenerateFacetError: If the normal vanishes
    """
    length = float(np.linalg.norm(normal))
    if length <= tol:
        raise DegenerateFacetError("Cannot build a frame from a zero normal")
    e3 = normal / length
    e1 = None
    for axis in np.eye(3):
        candidate = axis - np.dot(axis, e3) * e3
        if np.linalg.norm(candidate) > 1e-6:
            e1 = candidate / np.linalg.norm(candidate)
            break
    e2 = np.cross(e3, e1)
    return np.vstack([e1, e2, e3])


def segment_distances(point: np.ndarray, tails: np.ndarray, heads: np.ndarray) -> np.ndarray:
    """Euclidean distance from a point to every segment (tails[i], heads[i])."""
    seg = heads - tails
    lengths2 = np.einsum("ij,ij->i", seg, seg)
    safe = np.where(lengths2 > 0, lengths2, 1.0)
    t = np.clip(np.einsum("ij,ij->i", point - tails, seg) / safe, 0.0, 1.0)
    closest = tails + t[:, None] * seg
    return np.linalg.norm(closest - point, axis=1)


def point_in_polygon(point: np.ndarray, tails: np.ndarray, heads: np.ndarray) -> bool:
    """
    Even-odd classification of a 2D point against an unordered set of edges.

    Uses a half-open rule on the y coordinate, so the edges may describe any
    number of loops (holes included) in any order and orientation.
    """
    if len(tails) == 0:
        return False
    y0, y1 = tails[:, 1], heads[:, 1]
    straddle = (y0 > point[1]) != (y1 > point[1])
    dy = np.where(straddle, y1 - y0, 1.0)
    x = tails[:, 0] + (point[1] - y0) * (heads[:, 0] - tails[:, 0]) / dy
    return bool(np.count_nonzero(straddle & (x > point[0])) % 2)
