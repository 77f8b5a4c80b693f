"""User interface components."""

from .console import console, err_console
from .tables import ResultTable

__all__ = ["console", "err_console", "ResultTable"]
