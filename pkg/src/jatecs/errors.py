"""Exception types shared across the toolkit."""


class JatecsError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(JatecsError):
    """Invalid input data or arguments (bad IDs, duplicate names, bad counts)."""


class ParseError(JatecsError):
    """A corpus file could not be parsed. Always carries the offending line."""

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{self.path}:{line_no}: {message}")


class InternalError(JatecsError):
    """An internal invariant was violated; indicates a bug, not bad input."""
