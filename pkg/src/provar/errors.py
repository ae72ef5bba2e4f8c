"""Exception types shared across the package."""


class BudgetExhaustedError(RuntimeError):
    """A bounded search ran out of its candidate budget without an answer."""


class CapExceededError(RuntimeError):
    """An enumeration would exceed the configured element/coset cap."""


class NotFiniteIndexError(ValueError):
    """Operation requires a finite-index subgroup (complete automaton)."""


class NotDiagonalizableError(ValueError):
    """Matrix input violates the order-dividing-(p-1) precondition."""


class NoWitnessError(ValueError):
    """No separating witness exists for the given element."""
