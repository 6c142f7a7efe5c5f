"""Exception hierarchy shared by every module.

Input problems (bad descriptors, violated preconditions) derive from
``ValueError``; numeric failures (bracketing, overflow) derive from
``ArithmeticError``.  The CLI maps the two families to exit codes 2 and 3.
"""


class OrliczLabError(Exception):
    """Base class for all library errors."""


class InputError(OrliczLabError, ValueError):
    """A caller-supplied object violates a documented precondition."""


class DomainError(InputError):
    """Argument outside the domain of a function (e.g. ``u < 0``)."""


class ExtrapolationError(DomainError):
    """Tabulated function queried outside its grid with extrapolation off."""


class NumericError(OrliczLabError, ArithmeticError):
    """A numerical procedure could not produce a trustworthy result."""


class BracketError(NumericError):
    """Bisection could not bracket the root (degenerate Orlicz function)."""
