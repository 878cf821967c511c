"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific one that applies.
"""


class SpreadimError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SpreadimError, ValueError):
    """A CSV or grid-spec input could not be parsed."""


class ValidationError(SpreadimError, ValueError):
    """An input violates a structural invariant (shape, finiteness, range)."""


class DomainError(SpreadimError, ValueError):
    """A quantity was requested outside its mathematical domain."""
