"""Special functions, material response, scattering amplitudes and translation matrices."""

from .materials import MaterialKind, MaterialModel, Medium
from .scattering import AmplitudeBlock, BasisKind, ChannelBasis, Polarization
from .translation import Displacement, TranslationBlock, TranslationKind

__all__ = [
    "MaterialKind",
    "MaterialModel",
    "Medium",
    "AmplitudeBlock",
    "BasisKind",
    "ChannelBasis",
    "Polarization",
    "Displacement",
    "TranslationBlock",
    "TranslationKind",
]
