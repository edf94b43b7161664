"""Sections of mapped faces by the plane x3 = 0."""

import logging

import numpy as np

from ..errors import InconsistentFacetError

logger = logging.getLogger(__name__)


def plane_section(
    tails: np.ndarray, heads: np.ndarray, normal: np.ndarray, eps: float
) -> np.ndarray:
    """
    Segments cut on x3 = 0 by a face given through its (already mapped) edges.

    Edges within ``eps`` of the plane are returned as they are. Other edges
    contribute their crossing points, which are sorted along the section
    line and joined in alternate pairs. A vertex within ``eps`` of the plane
    counts as lying above it.

    Args:
        tails: Edge start points, n x 3
        heads: Edge end points, n x 3
        normal: Face normal in the mapped frame, orders the crossings
        eps: Absolute distance tolerance

    Returns:
        Segments as an m x 2 x 2 array

    Raises:
        InconsistentFacetError: If the number of crossings is odd
    """
    tails = np.asarray(tails, dtype=np.float64).reshape(-1, 3)
    heads = np.asarray(heads, dtype=np.float64).reshape(-1, 3)
    za, zb = tails[:, 2], heads[:, 2]

    flat = (np.abs(za) <= eps) & (np.abs(zb) <= eps)
    segments = [np.stack([tails[flat, :2], heads[flat, :2]], axis=1)]

    above_a, above_b = za >= -eps, zb >= -eps
    crossing = (above_a != above_b) & ~flat
    if np.count_nonzero(crossing) % 2:
        raise InconsistentFacetError(
            f"Face boundary crosses the section plane {np.count_nonzero(crossing)} times"
        )
    if np.any(crossing):
        a, b = tails[crossing], heads[crossing]
        za_c, zb_c = np.where(np.abs(a[:, 2]) <= eps, 0.0, a[:, 2]), b[:, 2]
        zb_c = np.where(np.abs(zb_c) <= eps, 0.0, zb_c)
        t = za_c / (za_c - zb_c)
        points = (a + t[:, None] * (b - a))[:, :2]

        direction = np.array([normal[1], -normal[0]], dtype=np.float64)
        order = np.argsort(points @ direction, kind="stable")
        points = points[order]
        segments.append(np.stack([points[0::2], points[1::2]], axis=1))

    result = np.concatenate(segments) if segments else np.zeros((0, 2, 2))
    logger.debug(f"Section: {int(flat.sum())} in-plane edges, {int(crossing.sum())} crossings")
    return result.reshape(-1, 2, 2)
