"""Exception hierarchy for casimir-cli."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .models.results import EnergyResult


class CasimirError(Exception):
    """Base class for all errors raised by casimir-cli."""


class ConfigError(CasimirError, ValueError):
    """A run configuration or user default is invalid."""


class GeometryError(CasimirError, ValueError):
    """Bodies overlap or a configuration is geometrically inconsistent."""


class SelectionError(CasimirError, ValueError):
    """An index lies outside its allowed range (e.g. m > l)."""


class ExtrapolationError(CasimirError, ValueError):
    """A tabulated material was evaluated outside its sampled range."""


class NumericalOverflowError(CasimirError, ArithmeticError):
    """A special-function value cannot be represented."""


class DeterminantError(CasimirError, ArithmeticError):
    """A log-determinant is non-finite, singular, or not real."""


class ConvergenceError(CasimirError, ArithmeticError):
    """Quadrature or truncation caps were reached before the tolerance."""

    def __init__(self, message: str, result: EnergyResult | None = None):
        super().__init__(message)
        self.result = result
