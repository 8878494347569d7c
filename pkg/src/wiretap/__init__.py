"""Secrecy capacity of the amplitude-constrained scalar Gaussian wiretap channel.

The main entry points are :func:`solve` for the optimal input,
:func:`bounds_report` for the closed-form bounds and
:func:`kkt_report` for certifying a candidate input.
"""

from .channel import ChannelParams, DiscreteDistribution
from .errors import BudgetError, DomainError, NumericalError, ValidationError, WiretapError
from .functionals import kkt_report, secrecy_information, xi_function
from .report import BoundsReport, bounds_report, sweep
from .solver import SolveResult, SolverConfig, brute_force_oracle, solve

__all__ = [
    "BoundsReport",
    "BudgetError",
    "ChannelParams",
    "DiscreteDistribution",
    "DomainError",
    "NumericalError",
    "SolveResult",
    "SolverConfig",
    "ValidationError",
    "WiretapError",
    "bounds_report",
    "brute_force_oracle",
    "kkt_report",
    "secrecy_information",
    "solve",
    "sweep",
    "xi_function",
]
