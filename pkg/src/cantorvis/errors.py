"""Exception types shared across the toolkit.

Every certified predicate in this package answers true, false, or refuses
with :class:`Inconclusive` when the interval enclosures it was handed are
too wide to separate the two sides.  Refusal is an error on purpose: a
caller that ignores it would silently turn a certificate into a guess.
"""

from __future__ import annotations

from fractions import Fraction


class CantorvisError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidInput(CantorvisError):
    """Input violates a documented precondition (bad shape, bad range)."""


class ResolutionExceeded(InvalidInput):
    """A query asked for structure finer than the stored resolution."""

    def __init__(self, message: str, *, required: int, available: int):
        super().__init__(message)
        self.required = required
        self.available = available


class Inconclusive(CantorvisError):
    """A certified comparison could not separate its operands.

    ``overlap`` is the width of the ambiguous region; shrinking the input
    enclosures below that width is guaranteed to make the comparison
    conclusive.
    """

    def __init__(self, message: str, *, overlap: Fraction):
        super().__init__(message)
        self.overlap = overlap


class BudgetExceeded(CantorvisError):
    """An exhaustive enumeration would exceed the configured item budget."""

    def __init__(self, message: str, *, required: int, budget: int):
        super().__init__(message)
        self.required = required
        self.budget = budget


class CapacityError(CantorvisError):
    """A construction cannot fit inside the requested truncation."""


class InfeasibleCover(CantorvisError):
    """No admissible cover exists for the given diameter cap."""
