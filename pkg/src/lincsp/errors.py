"""Exception hierarchy shared by every lincsp module."""

from __future__ import annotations


class LincspError(Exception):
    """Base class for all library errors."""


class ParameterError(LincspError, ValueError):
    """A numeric parameter (k, d, ell, n, ...) is outside its valid range."""


class MissingVariableError(LincspError, KeyError):
    """An assignment does not define a variable the CSP mentions."""

    def __init__(self, var: int):
        super().__init__(var)
        self.var = var

    def __str__(self) -> str:
        return f"assignment does not define variable {self.var}"


class PreconditionError(LincspError, ValueError):
    """Input violates an operation's precondition.

    ``witness`` carries whatever identifies the violation: an offending
    pair of constraint indices, or a count that exceeded its bound.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InvariantError(LincspError, AssertionError):
    """An internal guarantee failed. Always a bug."""


class ParseError(LincspError, ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class UnsupportedDomainError(LincspError, ValueError):
    """Operation only defined for d = 2."""


class SearchFailed(LincspError):
    """search_unsat exhausted its trials without a verified instance."""

    def __init__(self, message: str, outcomes):
        super().__init__(message)
        self.outcomes = outcomes
