"""Exception hierarchy shared by the library and the command line."""


class DiffConceptsError(Exception):
    """Base class for every error raised by this package."""


class InvalidValueError(DiffConceptsError, ValueError):
    """A numeric input was NaN or infinite."""


class InvalidArgumentError(DiffConceptsError, ValueError):
    """An argument violates an operation's precondition."""


class SchemaError(DiffConceptsError, ValueError):
    """Attribute names do not match the series schema."""


class DerivationError(DiffConceptsError, ValueError):
    """A sensor attribute cannot be derived from the given polyline."""


class ParseError(DiffConceptsError, ValueError):
    """Malformed CSV or JSON input; carries a 1-based position when known."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class CapacityError(DiffConceptsError, RuntimeError):
    """A configured size cap was exceeded; no partial result is produced."""
