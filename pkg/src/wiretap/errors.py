"""Exception types shared across the package."""


class WiretapError(Exception):
    """Base class for all package errors."""


class ValidationError(WiretapError, ValueError):
    """Invalid channel parameters, distributions or configuration."""


class DomainError(WiretapError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class NumericalError(WiretapError, ArithmeticError):
    """A numerical routine produced a non-finite value or failed to converge."""


class BudgetError(WiretapError, RuntimeError):
    """A combinatorial search would exceed its evaluation budget."""
