"""LAR JSON writer."""

from ..chains.complex import ChainComplex
from ..schemas import LarDocument
from .base import BaseWriter


class LarWriter(BaseWriter):
    """Lossless JSON: coordinates, canonical cell arrays and operator triples."""

    def write(self, complex_: ChainComplex) -> bytes:
        document = LarDocument.from_complex(complex_, float_digits=self.config.float_digits)
        return document.to_json().encode("utf-8")
