"""Exception hierarchy shared by all meanscope modules."""

from __future__ import annotations


class MeanscopeError(Exception):
    """Base class for every error raised by this package."""


class ExprSyntaxError(MeanscopeError, ValueError):
    """Malformed generator expression.

    ``offset`` is the 1-based UTF-8 byte offset into the source text.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.reason = message


class UnknownIdentifierError(ExprSyntaxError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class EmptyExpressionError(ExprSyntaxError):
    def __init__(self):
        super().__init__("empty expression", 1)


class JetError(MeanscopeError, ArithmeticError):
    """A jet computation left the real, finite domain.

    ``order`` is the lowest derivative order that failed (0 for the value
    itself). ``point`` is the base point when known.
    """

    def __init__(self, message: str, order: int = 0, point: float | None = None):
        if point is not None:
            message = f"{message} (at x={point!r})"
        super().__init__(message)
        self.order = order
        self.point = point
        self.reason = message


class DomainError(JetError):
    """Expression evaluated outside the domain of one of its operations."""


class InversionError(MeanscopeError):
    """Monotone inversion could not be carried out."""


class TargetOutsideBracketError(InversionError):
    pass


class NonMonotoneError(InversionError):
    pass


class RegularityError(MeanscopeError):
    """A sampled regularity condition is violated at ``point``."""

    def __init__(self, message: str, point: float | None = None, tag: str | None = None):
        super().__init__(message)
        self.point = point
        self.tag = tag


class CatalogError(MeanscopeError, ValueError):
    """Unknown builtin pair or parameter out of range."""
