"""Base writer interface."""

from abc import ABC, abstractmethod
from typing import Optional

from ..chains.complex import ChainComplex
from ..config import ExportConfig


class BaseWriter(ABC):
    """Abstract base class for arrangement writers."""

    def __init__(self, config: Optional[ExportConfig] = None):
        """
        Initialize writer with export options.

        Args:
            config: Export configuration. Defaults are used if None.
        """
        self.config = config or ExportConfig()

    @abstractmethod
    def write(self, complex_: ChainComplex) -> bytes:
        """
        Serialize a complex or arrangement.

        Args:
            complex_: Chain complex to export

        Returns:
            Encoded file content
        """
        pass

    def get_format_name(self) -> str:
        """Get the name of the format this writer produces."""
        return self.__class__.__name__.replace("Writer", "").lower()
