"""Entry point for running casimir-cli as a module."""

from .cli import main

if __name__ == "__main__":
    main()
