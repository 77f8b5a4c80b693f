"""Name suggestions."""

from .fuzzy import NameSearch, did_you_mean

__all__ = ["NameSearch", "did_you_mean"]
