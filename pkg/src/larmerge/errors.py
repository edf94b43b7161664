"""Exception hierarchy shared by the library and the CLI."""

from typing import Any, Optional


class LarmergeError(Exception):
    """Base class for all errors raised by larmerge."""

    exit_code = 1

    def __init__(self, message: str, provenance: Optional[Any] = None):
        super().__init__(message)
        self.provenance = provenance

    def to_dict(self) -> dict:
        """Machine-readable form used by ``--json-errors``."""
        return {
            "error": self.__class__.__name__,
            "message": str(self),
            "exit_code": self.exit_code,
            "provenance": self.provenance,
        }


class InputError(LarmergeError, ValueError):
    """Problems with user-supplied data or arguments."""

    exit_code = 2


class MalformedInputError(InputError):
    """Unparseable document, index overflow or non-uniform arity."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        provenance: Optional[Any] = None,
    ):
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{message} ({location})"
        super().__init__(message, provenance)
        self.line = line
        self.column = column


class EmptyInputError(InputError):
    pass


class DimensionMismatchError(InputError):
    pass


class UnknownCellError(InputError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0])


class UnsupportedFormatError(InputError):
    pass


class GeometryError(LarmergeError):
    """Geometric or topological degeneracies found while computing."""

    exit_code = 3


class DegenerateCellError(GeometryError, ValueError):
    pass


class DegenerateGeometryError(GeometryError):
    pass


class DegenerateFacetError(GeometryError):
    pass


class InconsistentFacetError(GeometryError):
    pass


class NotACycleError(GeometryError, ValueError):
    pass


class MalformedSkeletonError(GeometryError):
    pass


class DanglingFacetError(GeometryError):
    pass


class InconsistentContainmentError(GeometryError):
    pass
