"""Result serialization."""

from .records import print_json, write_records

__all__ = ["print_json", "write_records"]
