"""
Exception hierarchy for legendre-ep.

Every failure raised by the numeric kernels derives from LegendreError so the
CLI can map it to a stable exit code:
- PoleError: an evaluation hit a gamma-function pole (a singular set)
- DomainError / DivergenceError: a precondition of the operation is violated
- ConvergenceError: a series or quadrature did not reach its tolerance
- DegenerateParameterError: a transformation prefactor is singular
- UsageError: a request that cannot be dispatched
"""

from __future__ import annotations


class LegendreError(Exception):
    """Base class for all legendre-ep errors."""


class PoleError(LegendreError):
    """
    Raised when an evaluation lands on a pole.

    Attributes:
        location: The singular point that was hit
        singular_set: Human readable description of the singular family
    """

    def __init__(self, location: complex, singular_set: str):
        self.location = location
        self.singular_set = singular_set
        super().__init__(f"pole at {_fmt(location)} ({singular_set})")


class DomainError(LegendreError, ValueError):
    """Raised when an input violates the preconditions of an operation."""


class DivergenceError(DomainError):
    """Raised when a requested normalization integral does not exist."""


class ConvergenceError(LegendreError):
    """Raised when a series or quadrature fails to reach its tolerance."""


class DegenerateParameterError(LegendreError):
    """Raised when a hypergeometric transformation introduces a gamma pole."""


class UsageError(LegendreError):
    """Raised when a request cannot be dispatched, e.g. a filter that selects nothing."""


def _fmt(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:g}"
    return f"{z.real:g}{z.imag:+g}i"
