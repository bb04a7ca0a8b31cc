"""Exception hierarchy shared by the engine and the CLI."""


class CubhomError(Exception):
    """Base class for all library errors."""


class GraphParseError(CubhomError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(CubhomError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class ResourceLimitError(CubhomError):
    """A configured size cap would be exceeded.

    ``estimate`` carries the number of objects seen (or projected) when the
    cap was hit, so callers can report how far off they were.
    """

    def __init__(self, message: str, estimate: int | None = None):
        self.estimate = estimate
        super().__init__(message)


class LiftObstruction(CubhomError):
    """A singular cube does not lift to the universal covering tree."""

    def __init__(self, message: str, cycle: tuple[int, ...] = ()):
        self.cycle = cycle
        super().__init__(message)


class ClosednessError(CubhomError, AssertionError):
    """A restricted family of cubes is not closed under taking faces."""
