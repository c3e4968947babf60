"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class HyperodeError(Exception):
    """Base class for every error raised by this package."""


class ParseError(HyperodeError, ValueError):
    """Malformed expression text.

    Attributes
    ----------
    offset : int
        Byte offset into the source text where parsing failed.
    expected : frozenset of str
        Token kinds that would have been accepted at ``offset``.
    """

    def __init__(self, message: str, offset: int, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class UnknownFunctionError(ParseError):
    pass


class UnboundParameterError(HyperodeError, ValueError):
    pass


class DomainError(HyperodeError, ValueError):
    """A value left the domain where it is defined (log of a negative, 0/0, ...)."""


class DegeneracyError(DomainError):
    """A point lies on (or within the margin of) the locus Phi^2 = h(x)."""


class PreconditionError(DomainError):
    pass


class NumericalError(HyperodeError, RuntimeError):
    """Step-size underflow, quadrature failure, non-convergent root finding."""
