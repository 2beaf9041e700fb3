"""Exception hierarchy shared by all loosepath modules."""

from __future__ import annotations


class LoosePathError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(LoosePathError, ValueError):
    """Malformed input: bad edge, overlapping parts, out-of-range parameter."""


class InsufficientPartError(ValidationError):
    """A partite family is too small to host the requested path."""

    def __init__(self, part: str, size: int, needed: int) -> None:
        super().__init__(f"part {part} has {size} vertices, needs at least {needed}")
        self.part = part
        self.size = size
        self.needed = needed


class ThresholdError(LoosePathError, ValueError):
    """n is below the guaranteed threshold of the requested method (strict mode)."""

    def __init__(self, n: int, n_min: int, method: str) -> None:
        super().__init__(f"{method}: n={n} is below the guaranteed threshold n_min={n_min}")
        self.n = n
        self.n_min = n_min
        self.method = method


class InvariantViolation(LoosePathError, RuntimeError):
    """An internal invariant failed. Always a bug or an upstream precondition breach."""

    def __init__(self, message: str, edge: tuple[int, ...] | None = None) -> None:
        if edge is not None:
            message = f"{message} (edge {list(edge)})"
        super().__init__(message)
        self.edge = edge


class NoGuaranteeError(LoosePathError, RuntimeError):
    """Permissive-mode run ran out of room below the guaranteed threshold."""


class TooLargeError(LoosePathError, ValueError):
    """An exhaustive computation would exceed its configured guard."""


class ParseError(LoosePathError, ValueError):
    """A coloring spec, coloring file or witness file could not be parsed."""
