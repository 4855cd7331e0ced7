"""Exception types raised across the package."""


class CondRenyiError(Exception):
    """Base class for all package errors."""


class DomainError(CondRenyiError, ValueError):
    """An argument lies outside the domain of the operation."""


class NegativeEntry(DomainError):
    pass


class NotNormalized(DomainError):
    pass


class ShapeMismatch(DomainError):
    pass


class LengthMismatch(DomainError):
    pass


class ZeroMarginal(DomainError):
    pass


class AlphaOne(DomainError):
    """Raised for alpha at (or numerically too close to) 1; use the Shannon route."""


class OutOfRange(DomainError):
    pass


class AlphaOutOfRange(OutOfRange):
    pass


class EpsOutOfRange(OutOfRange):
    pass


class ParamOutOfRange(OutOfRange):
    pass


class NotSorted(DomainError):
    pass


class TransferTooLarge(DomainError):
    pass


class SlotNotZero(DomainError):
    pass


class SupportOverlap(DomainError):
    pass


class PreconditionNotMet(DomainError):
    pass


class ZeroBound(DomainError):
    pass


class NotHermitian(DomainError):
    pass


class NotReordered(DomainError):
    pass


class NotWalked(DomainError):
    pass


class BudgetExceeded(CondRenyiError):
    """The distance between the two inputs exceeds the requested budget."""

    def __init__(self, actual, budget, what="distance"):
        self.actual = actual
        self.budget = budget
        super().__init__(f"{what} {actual!r} exceeds budget {budget!r}")


class TvBudgetExceeded(BudgetExceeded):
    def __init__(self, actual, budget):
        super().__init__(actual, budget, "total variation distance")


class TraceBudgetExceeded(BudgetExceeded):
    def __init__(self, actual, budget):
        super().__init__(actual, budget, "trace distance")


class NoConvergence(CondRenyiError, ArithmeticError):
    pass


class ChainViolation(CondRenyiError, AssertionError):
    """An inequality of the constructive bound derivation failed numerically.

    Never expected on valid inputs; signals an implementation bug.
    """

    def __init__(self, name, lhs, rhs):
        self.name = name
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"chain step {name!r} violated: {lhs!r} > {rhs!r}")


class ParseError(CondRenyiError):
    pass
