"""Wavefront OBJ writer for 3D arrangements."""

import logging

import numpy as np

from ..chains.complex import ChainComplex, Skeleton
from ..chains.polygons import face_triangles
from ..errors import UnsupportedFormatError
from .base import BaseWriter

logger = logging.getLogger(__name__)


class ObjWriter(BaseWriter):
    """
    One group per 3-cell made of its triangulated, outward-facing faces.

    With ``exploded`` > 1 every cell is pushed away from the centre of the
    arrangement by that factor.
    """

    def write(self, complex_: ChainComplex) -> bytes:
        if complex_.vertices.dim != 3 or complex_.dim != 3:
            raise UnsupportedFormatError("OBJ export needs a 3D arrangement")

        skeleton = Skeleton(
            complex_.vertices,
            complex_.skeletons[1],
            complex_.boundary(1),
            complex_.skeletons[2],
            complex_.boundary(2),
        )
        coords = complex_.vertices.coords
        centre = coords.mean(axis=0)
        triangles = {}
        lines = ["# larmerge arrangement"]
        offset = 1
        top = complex_.boundary(3)
        for k in range(top.shape[1]):
            column = top.column(k)
            cell_triangles = []
            for f, a in column.items():
                if f not in triangles:
                    triangles[f] = face_triangles(skeleton, f)
                tri = triangles[f]
                cell_triangles.append(tri if a > 0 else tri[:, ::-1])
            tris = np.concatenate(cell_triangles) if cell_triangles else np.zeros((0, 3), int)
            used, local = np.unique(tris, return_inverse=True)
            points = coords[used]
            shift = (self.config.exploded - 1.0) * (points.mean(axis=0) - centre)

            lines.append(f"g cell_{k}")
            lines.extend("v {:.17g} {:.17g} {:.17g}".format(*(p + shift)) for p in points)
            for i, j, m in local.reshape(-1, 3) + offset:
                lines.append(f"f {i} {j} {m}")
            offset += len(used)

        logger.debug(f"OBJ with {top.shape[1]} groups")
        return ("\n".join(lines) + "\n").encode("utf-8")
