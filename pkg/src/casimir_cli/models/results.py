"""Result and numerical-control types shared by the energy pipelines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre quadrature on u in (0, 1) with kappa = u / (1 - u) / d_char.

    Node counts double from ``initial_nodes`` for at most ``max_levels``
    refinements, stopping once successive levels agree to ``rtol``.
    """

    initial_nodes: int = 32
    max_levels: int = 6
    rtol: float = 1e-6
    atol: float = 1e-300

    def __post_init__(self) -> None:
        if self.initial_nodes < 2:
            raise ValueError("quadrature needs at least two nodes")
        if self.max_levels < 1:
            raise ValueError("quadrature needs at least one refinement level")
        if not self.rtol > 0:
            raise ValueError("quadrature tolerance must be positive")

    def nodes(self, level: int) -> int:
        return self.initial_nodes * 2**level


@dataclass(frozen=True)
class TruncationPolicy:
    """Partial-wave truncation: start, step, relative stop criterion and cap."""

    initial: int = 8
    increment: int = 4
    rtol: float = 1e-4
    cap: int = 60

    def __post_init__(self) -> None:
        if self.increment < 1:
            raise ValueError("truncation increment must be at least 1")
        if self.cap < self.initial:
            raise ValueError(f"truncation cap {self.cap} is below the initial order {self.initial}")

    @classmethod
    def for_gap(cls, radius_max: float, radius_sum: float, distance: float, **overrides) -> "TruncationPolicy":
        """Default start max(8, ceil(6 R_max / (d - R_sum))) for a given gap."""
        gap = distance - radius_sum
        start = max(8, math.ceil(6.0 * radius_max / gap)) if gap > 0 else 8
        cap = overrides.pop("cap", cls.cap)
        return cls(initial=min(start, cap), cap=cap, **overrides)


@dataclass
class EnergyResult:
    """Energy with error estimates and convergence diagnostics.

    ``value`` is in hbar c per length unit, further divided by area (plates)
    or length (cylinders) as given by ``per_unit``.
    """

    value: float
    quad_err: float = 0.0
    trunc_err: float = 0.0
    order: int = 0
    nodes: int = 0
    max_imag: float = 0.0
    converged: bool = True
    per_unit: str = ""
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def error(self) -> float:
        return self.quad_err + self.trunc_err

    def __str__(self) -> str:
        unit = f" per {self.per_unit}" if self.per_unit else ""
        flag = "" if self.converged else " (not converged)"
        return f"{self.value:.10g} ± {self.error:.2g}{unit}{flag}"


@dataclass(frozen=True)
class ForceResult:
    """Force -dE/dd from central differences with a Richardson estimate."""

    value: float
    error: float
    step: float


@dataclass(frozen=True)
class SweepRecord:
    """One evaluated point of a sweep (a single run has one record)."""

    sweep_param: str
    value: float
    result: EnergyResult
