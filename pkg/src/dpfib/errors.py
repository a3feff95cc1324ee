"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class DpfibError(Exception):
    """Base class for all errors raised by dpfib."""


class InvalidInputError(DpfibError, ValueError):
    """Malformed input: wrong dimensions, bad ranges, unparsable text."""


class CatalogError(InvalidInputError):
    """A catalog file violates the schema or a lattice invariant."""


class PolynomialSyntaxError(InvalidInputError):
    """Polynomial text could not be parsed.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DomainError(DpfibError):
    """Well-formed input for which the requested construction is undefined."""


class UnsupportedTypeError(DomainError):
    """The fibration type is outside the scope of the requested operation."""


class IntegrityError(DpfibError):
    """An internal consistency check failed (usually a catalog data bug)."""
