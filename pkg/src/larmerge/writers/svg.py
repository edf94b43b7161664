"""SVG writer for planar arrangements."""

import logging
import xml.etree.ElementTree as ET

import numpy as np

from ..chains.complex import ChainComplex
from ..chains.polygons import signed_loops
from ..errors import UnsupportedFormatError
from .base import BaseWriter

logger = logging.getLogger(__name__)

SVG_NAMESPACE = "http://www.w3.org/2000/svg"
MARGIN = 10


def cell_color(k: int) -> str:
    """Distinct fill colour per cell index."""
    hue = (k * 137.508) % 360
    return f"hsl({hue:.1f}, 60%, 70%)"


class SvgWriter(BaseWriter):
    """Filled 2-cells (even-odd paths, holes included) and stroked edges."""

    def write(self, complex_: ChainComplex) -> bytes:
        if complex_.vertices.dim != 2 or complex_.dim != 2:
            raise UnsupportedFormatError("SVG export needs a 2D arrangement")

        coords = complex_.vertices.coords
        size = self.config.svg_size
        lo = coords.min(axis=0) if len(coords) else np.zeros(2)
        hi = coords.max(axis=0) if len(coords) else np.ones(2)
        extent = float(max(hi[0] - lo[0], hi[1] - lo[1])) or 1.0
        scale = (size - 2 * MARGIN) / extent
        height = int(round((hi[1] - lo[1]) * scale)) + 2 * MARGIN

        # y grows downwards in SVG
        def project(p):
            return (MARGIN + (p[0] - lo[0]) * scale, height - MARGIN - (p[1] - lo[1]) * scale)

        root = ET.Element(
            "svg",
            {
                "xmlns": SVG_NAMESPACE,
                "width": str(size),
                "height": str(height),
                "viewBox": f"0 0 {size} {height}",
            },
        )
        cells = ET.SubElement(root, "g", {"id": "cells"})
        edges = complex_.skeletons[1]
        top = complex_.boundary(2)
        for k in range(top.shape[1]):
            parts = []
            for loop in signed_loops(top.column(k), edges):
                points = " L ".join("{:.3f} {:.3f}".format(*project(coords[v])) for v in loop)
                parts.append(f"M {points} Z")
            ET.SubElement(
                cells,
                "path",
                {
                    "id": f"cell-{k}",
                    "d": " ".join(parts),
                    "fill": cell_color(k),
                    "fill-rule": "evenodd",
                    "stroke": "none",
                },
            )

        strokes = ET.SubElement(root, "g", {"id": "edges", "stroke": "black", "stroke-width": "1"})
        for a, b in edges:
            (x1, y1), (x2, y2) = project(coords[a]), project(coords[b])
            ET.SubElement(
                strokes,
                "line",
                {"x1": f"{x1:.3f}", "y1": f"{y1:.3f}", "x2": f"{x2:.3f}", "y2": f"{y2:.3f}"},
            )

        logger.debug(f"SVG with {top.shape[1]} cells and {len(edges)} edges")
        return ET.tostring(root, encoding="utf-8", xml_declaration=True)
