"""Exception types raised by validators and checkers.

Every error carries the witnessing data as attributes so callers (and the
audit runner) can serialize the counterexample.
"""


class RelatorsError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(RelatorsError, ValueError):
    """Raw data does not describe a valid structure."""

    def __init__(self, message, **witness):
        super().__init__(message)
        self.witness = witness

    def __getattr__(self, name):
        witness = self.__dict__.get("witness", {})
        if name in witness:
            return witness[name]
        raise AttributeError(name)


class IndexOutOfRange(ValidationError):
    pass


class DuplicateEntry(ValidationError):
    pass


class IncompleteTable(ValidationError):
    pass


class CompositionDomainMismatch(ValidationError):
    pass


class MissingIdentity(ValidationError):
    pass


class NotAssociative(ValidationError):
    pass


class NotInvertible(ValidationError):
    pass


class BoundaryMismatch(ValidationError):
    pass


class NotFunctorial(ValidationError):
    pass


class LeftActionNotFunctorial(ValidationError):
    pass


class RightActionNotFunctorial(ValidationError):
    pass


class ActionsIncompatible(ValidationError):
    pass


class MalformedAction(ValidationError):
    pass


class NotTwoSided(ValidationError):
    pass


class NotAGroup(ValidationError):
    pass


class NotEquivariant(ValidationError):
    pass


class EquationFailed(ValidationError):
    """An internal structure equation fails; ``equation`` names it."""

    def __init__(self, equation, message=None, **witness):
        super().__init__(message or f"equation {equation!r} fails", equation=equation, **witness)


class InstanceMismatch(RelatorsError, ValueError):
    """Objects or morphisms from different base categories were mixed."""


class PreconditionViolated(RelatorsError, ValueError):
    pass


class SearchBudgetExceeded(RelatorsError):
    """The isomorphism search ran out of nodes; says nothing about existence."""


class NoFiller(RelatorsError):
    pass


class MultipleFillers(RelatorsError):
    pass


class ComparisonFailed(RelatorsError):
    """Two routes that should agree did not. Always an implementation bug."""

    def __init__(self, message, **witness):
        super().__init__(message)
        self.witness = witness


class SupportMismatch(ComparisonFailed):
    pass


class ClaimFailed(ComparisonFailed):
    pass


class EquivalenceViolated(ComparisonFailed):
    pass
