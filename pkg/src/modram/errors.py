"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ModramError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ModramError, ValueError):
    """An argument lies outside the domain of an operation."""


class DivisionByZero(ModramError, ZeroDivisionError):
    pass


class StructuralError(ModramError, TypeError):
    """Operands live in incompatible rings or specs."""


class PreconditionError(ModramError, ValueError):
    pass


class SingularError(ModramError, ValueError):
    """An implicit relation cannot be solved to first order."""


class NonContractiveError(ModramError, RuntimeError):
    """A fixed-point iteration failed to gain precision."""


class NotAPGroupError(ModramError, ValueError):
    pass


class NotTotallyRamifiedError(ModramError, ValueError):
    pass


class ParseError(ModramError, ValueError):
    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position} in {text!r}"
        super().__init__(message)
