"""Exception types shared across the library."""


class GraphAlgError(Exception):
    """Base class for errors raised by this library."""


class ShapeError(GraphAlgError, ValueError):
    """Operand dimensions do not line up."""


class FormatError(GraphAlgError, RuntimeError):
    """A container is not stored in the format an operation requires."""


class ParseError(GraphAlgError, ValueError):
    """A file could not be parsed; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
