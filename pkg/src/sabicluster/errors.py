"""Exception hierarchy shared across the package."""


class BiclusterError(Exception):
    """Base class for all package errors."""


class ParseError(BiclusterError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class EmptyInputError(BiclusterError):
    pass


class DegenerateMatrixError(BiclusterError):
    """Matrix (or selection) too small to score: fewer than 2 rows or columns."""


class DegenerateBiclusterError(BiclusterError):
    pass


class EmptySelectionError(BiclusterError):
    pass


class DimensionError(BiclusterError, ValueError):
    pass


class ContractError(BiclusterError, ValueError):
    """A documented precondition was violated by the caller."""
