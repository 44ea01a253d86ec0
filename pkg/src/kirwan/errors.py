"""Exception taxonomy.

Everything raised on purpose derives from KirwanError so callers (and the CLI)
can catch one base class.  BudgetExceeded and VerificationError carry enough
state to report what blew up without re-running the computation.
"""

from __future__ import annotations


class KirwanError(Exception):
    """Base class for all library errors."""


class ParseError(KirwanError, ValueError):
    """Malformed textual input (polynomial, rational, weight vector)."""


class InexactDivisionError(KirwanError, ArithmeticError):
    """An exact division left a remainder.

    Raised where theory promises divisibility (colon-ideal generators, euler
    inverses); seeing it means a bug upstream, not bad user input.
    """


class NonGenericError(KirwanError, ValueError):
    """A weight vector admits a perfect balance: some S has equal side sums."""

    def __init__(self, message: str, witness: frozenset | None = None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(KirwanError, RuntimeError):
    """A Groebner run crossed a hard resource limit.

    Partial bases are never returned; the attributes say which limit tripped.
    """

    def __init__(self, message: str, *, kind: str, limit: int, observed: int):
        super().__init__(message)
        self.kind = kind
        self.limit = limit
        self.observed = observed


class VerificationError(KirwanError, AssertionError):
    """An internal cross-check failed (certificate replay, S-criterion, ...)."""
