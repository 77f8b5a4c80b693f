"""Energy assembly, integration and the concrete geometries."""

from .energy import LogDet, Pipeline, integrate_energy, logdet, matsubara_free_energy
from .geometries import build_pipeline, evaluate

__all__ = ["LogDet", "Pipeline", "integrate_energy", "logdet", "matsubara_free_energy", "build_pipeline", "evaluate"]
