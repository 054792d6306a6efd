"""
Exception hierarchy shared by every forrelab service.

PreconditionError and its subclasses signal caller mistakes (bad ranges,
shapes, budgets, malformed files, misbehaving adversaries); the CLI maps them
to exit code 2 and the HTTP API to 422. Anything else is an internal error.
"""


class ForrelabError(Exception):
    """Base class for all forrelab errors."""


class PreconditionError(ForrelabError):
    """An operation was called outside its documented preconditions."""


class DomainRangeError(PreconditionError):
    """A numeric parameter (ell, eps, n, repetitions, ...) is out of range."""


class ShapeMismatchError(PreconditionError):
    """Input length, arity or matrix shape does not match."""


class BudgetExceededError(PreconditionError):
    """A world or snapshot would exceed the configured memory budget."""


class NetlistFormatError(PreconditionError):
    """A circuit netlist could not be parsed."""


class SnapshotFormatError(PreconditionError):
    """A world snapshot file is truncated or has a bad header."""


class AdversaryProtocolError(PreconditionError):
    """An adversary broke the oracle-access protocol."""


class QueryBudgetExceeded(AdversaryProtocolError):
    """An adversary exceeded its query cap T."""
