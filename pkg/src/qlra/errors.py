"""Exception hierarchy shared by all modules."""


class QLRAError(Exception):
    """Base class for every error raised by the package."""


class ParseError(QLRAError, ValueError):
    """Input text is not a well-formed JSON document."""


class SchemaError(QLRAError, ValueError):
    """Document is valid JSON but has the wrong shape or range.

    ``path`` names the offending location, e.g. ``"pair_cond/13/2"``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class DegenerateContextError(QLRAError, ValueError):
    """A measurement context has (numerically) zero total probability."""


class DomainError(QLRAError, ValueError):
    """A coefficient lies outside the range where the formula is real."""


class InconsistentRowError(QLRAError, ValueError):
    """No sign branch satisfies the three cosine equations of a row."""

    def __init__(self, row: int, message: str):
        self.row = row
        super().__init__(f"row {row + 1}: {message}")


class UndefinedLambdaError(QLRAError, ValueError):
    """An interference coefficient needed by a formula is undefined."""
