"""Material tables and built-in materials."""

from .parser import parse_csv, parse_excel, parse_table
from .registry import BUILTIN_MATERIALS, builtin_material

__all__ = ["parse_csv", "parse_excel", "parse_table", "BUILTIN_MATERIALS", "builtin_material"]
