"""Exception hierarchy. Everything derives from :class:`IsacError`."""

from __future__ import annotations


class IsacError(Exception):
    pass


class DegenerateInput(IsacError, ValueError):
    pass


class NotOnBoundary(IsacError, ValueError):
    pass


class Discontinuous(IsacError, ValueError):
    pass


class SingularElevation(IsacError, ArithmeticError):
    pass


class OutOfRange(IsacError, ValueError):
    pass


class NoSignChange(IsacError):
    """The corner/center balance has no root on ``[R/2, R]``.

    ``radius`` carries the endpoint with the smaller worst-case loss so a
    caller can fall back to it.
    """

    def __init__(self, message: str, radius: float):
        super().__init__(message)
        self.radius = radius


class InfeasibleThreshold(IsacError, ValueError):
    pass


class MonotonicityViolation(IsacError, AssertionError):
    pass


class ResolutionTooCoarse(IsacError):
    pass


class ParseError(IsacError, ValueError):
    """Unreadable input; ``field`` and ``line`` locate the problem when known."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        super().__init__(message)
        self.field = field
        self.line = line


class ValidationError(IsacError, ValueError):
    pass
