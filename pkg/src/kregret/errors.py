"""Exception hierarchy shared by the library and the CLI."""


class KRegretError(Exception):
    """Base class for all errors raised by :mod:`kregret`."""

    exit_code = 1


class InputError(KRegretError):
    """Malformed or missing input (empty file, unknown id, bad column)."""

    exit_code = 2


class ParseError(InputError):
    """A CSV cell could not be read as a number."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class DomainError(KRegretError):
    """Input that is well formed but outside the mathematical domain."""

    exit_code = 3


class UnsupportedDimensionError(DomainError):
    exit_code = 3


class GuardError(KRegretError):
    """A configured safety budget would be exceeded."""

    exit_code = 4


class SweepInvariantError(RuntimeError):
    """The plane sweep reached an inconsistent state (a bug, not bad input)."""
