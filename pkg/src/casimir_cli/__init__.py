"""Casimir energies from scattering amplitudes and translation matrices."""

__version__ = "0.1.0"
