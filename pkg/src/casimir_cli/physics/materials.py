"""Electromagnetic response models at imaginary frequency.

All responses are evaluated at omega = i c kappa, where they are real and even
in kappa. A perfect conductor is a symbolic model: its permittivity is the
``PEC`` marker (``math.inf``) and Fresnel/amplitude code takes the limit
analytically.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import ConfigError, ExtrapolationError

logger = logging.getLogger(__name__)

PEC = math.inf


class MaterialKind(Enum):
    """Kinds of response model."""

    VACUUM = "vacuum"
    PERFECT_CONDUCTOR = "perfect_conductor"
    CONSTANT = "constant"
    TWO_LEVEL_ATOM = "two_level_atom"
    TABULATED = "tabulated"
    DRUDE = "drude"


@dataclass(frozen=True)
class MaterialModel:
    """A local, isotropic response model epsilon(i c kappa), mu(i c kappa).

    Only the fields relevant to ``kind`` are used. Construct instances with
    the ``vacuum()``, ``perfect_conductor()``, ``constant()``, ... helpers.
    """

    kind: MaterialKind
    name: str = ""
    eps0: float = 1.0
    mu0: float = 1.0
    alpha0: float = 0.0
    d10: float = 0.0
    plasma: float = 0.0
    damping: float = 0.0
    kappas: tuple[float, ...] = field(default=(), repr=False)
    eps_samples: tuple[float, ...] = field(default=(), repr=False)
    mu_samples: tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if self.kind is MaterialKind.CONSTANT:
            if not self.eps0 > 0 or self.mu0 < 0:
                raise ConfigError(f"invalid constant response eps={self.eps0}, mu={self.mu0}")
            if self.eps0 < 1:
                logger.warning("material %s has eps0 = %g < 1", self.name or "constant", self.eps0)
        if self.kind is MaterialKind.TWO_LEVEL_ATOM and (self.alpha0 < 0 or self.d10 <= 0):
            raise ConfigError("two-level atom needs alpha0 >= 0 and d10 > 0")
        if self.kind is MaterialKind.DRUDE and (self.plasma <= 0 or self.damping < 0):
            raise ConfigError("Drude model needs plasma > 0 and damping >= 0")
        if self.kind is MaterialKind.TABULATED:
            k = np.asarray(self.kappas, dtype=float)
            if k.size < 2:
                raise ConfigError("tabulated material needs at least two samples")
            if np.any(np.diff(k) <= 0) or k[0] <= 0:
                raise ConfigError("tabulated kappa samples must be positive and strictly increasing")
            if len(self.eps_samples) != k.size:
                raise ConfigError("tabulated eps samples do not match kappa samples")
            if self.mu_samples and len(self.mu_samples) != k.size:
                raise ConfigError("tabulated mu samples do not match kappa samples")
            if min(self.eps_samples) <= 0 or (self.mu_samples and min(self.mu_samples) <= 0):
                raise ConfigError("tabulated responses must be positive")

    @property
    def is_pec(self) -> bool:
        return self.kind is MaterialKind.PERFECT_CONDUCTOR

    @property
    def is_vacuum(self) -> bool:
        if self.kind is MaterialKind.VACUUM:
            return True
        return self.kind is MaterialKind.CONSTANT and self.eps0 == 1.0 and self.mu0 == 1.0

    def __str__(self) -> str:
        if self.name:
            return self.name
        if self.kind is MaterialKind.CONSTANT:
            return f"constant(eps={self.eps0:g}, mu={self.mu0:g})"
        return self.kind.value


def vacuum() -> MaterialModel:
    return MaterialModel(MaterialKind.VACUUM, name="vacuum")


def perfect_conductor() -> MaterialModel:
    return MaterialModel(MaterialKind.PERFECT_CONDUCTOR, name="pec")


def constant(eps0: float, mu0: float = 1.0, name: str = "") -> MaterialModel:
    return MaterialModel(MaterialKind.CONSTANT, name=name, eps0=eps0, mu0=mu0)


def two_level_atom(alpha0: float, d10: float, name: str = "") -> MaterialModel:
    """Atom with static polarizability ``alpha0`` and transition length ``d10``."""
    return MaterialModel(MaterialKind.TWO_LEVEL_ATOM, name=name, alpha0=alpha0, d10=d10)


def drude(plasma: float, damping: float = 0.0, name: str = "") -> MaterialModel:
    """Drude metal with plasma wave number and damping in inverse length."""
    return MaterialModel(MaterialKind.DRUDE, name=name, plasma=plasma, damping=damping)


def tabulated(
    kappas: list[float] | np.ndarray,
    eps: list[float] | np.ndarray,
    mu: list[float] | np.ndarray | None = None,
    name: str = "",
) -> MaterialModel:
    return MaterialModel(
        MaterialKind.TABULATED,
        name=name,
        kappas=tuple(float(v) for v in kappas),
        eps_samples=tuple(float(v) for v in eps),
        mu_samples=tuple(float(v) for v in mu) if mu is not None else (),
    )


def _interpolate(model: MaterialModel, samples: tuple[float, ...], kappa: float) -> float:
    k = np.asarray(model.kappas)
    if kappa < k[0] or kappa > k[-1]:
        raise ExtrapolationError(
            f"kappa = {kappa:g} outside tabulated range [{k[0]:g}, {k[-1]:g}] of {model}"
        )
    return float(np.exp(np.interp(math.log(kappa), np.log(k), np.log(samples))))


def permittivity(model: MaterialModel, kappa: float) -> float:
    """epsilon(i c kappa); ``PEC`` for a perfect conductor."""
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    match model.kind:
        case MaterialKind.VACUUM:
            return 1.0
        case MaterialKind.PERFECT_CONDUCTOR:
            return PEC
        case MaterialKind.CONSTANT:
            return model.eps0
        case MaterialKind.TWO_LEVEL_ATOM:
            return 1.0
        case MaterialKind.DRUDE:
            denom = kappa * (kappa + model.damping)
            return PEC if denom == 0.0 else 1.0 + model.plasma**2 / denom
        case MaterialKind.TABULATED:
            return _interpolate(model, model.eps_samples, kappa)
    raise AssertionError(model.kind)


def permeability(model: MaterialModel, kappa: float) -> float:
    """mu(i c kappa). A perfect conductor is treated as mu = 1."""
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    match model.kind:
        case MaterialKind.CONSTANT:
            return model.mu0
        case MaterialKind.TABULATED if model.mu_samples:
            return _interpolate(model, model.mu_samples, kappa)
        case _:
            return 1.0


def fresnel_from_response(eps: float, mu: float, x):
    """Fresnel coefficients (rM, rE) for given responses at x = kappa / q."""
    x = np.asarray(x, dtype=float)
    if math.isinf(eps):
        return -np.ones_like(x), np.ones_like(x)
    n2 = eps * mu
    s = np.sqrt(1.0 + (n2 - 1.0) * x * x)
    r_m = (mu - s) / (mu + s)
    r_e = (eps - s) / (eps + s)
    return r_m, r_e


def fresnel(model: MaterialModel, kappa: float, x):
    """Fresnel reflection coefficients (rM, rE) of a half-space.

    ``x = 1 / sqrt(1 + k_perp^2 / kappa^2)`` lies in (0, 1].
    """
    return fresnel_from_response(permittivity(model, kappa), permeability(model, kappa), x)


def atom_alpha(model: MaterialModel, u, d: float):
    """Dynamic polarizability alpha(u) of a two-level atom with u = kappa * d."""
    s2 = (d / model.d10) ** 2
    u = np.asarray(u, dtype=float)
    return s2 * model.alpha0 / (s2 + u * u)


@dataclass(frozen=True)
class Medium:
    """Uniform medium filling the space between the bodies."""

    material: MaterialModel = field(default_factory=vacuum)

    def eps(self, kappa: float) -> float:
        return permittivity(self.material, kappa)

    def mu(self, kappa: float) -> float:
        return permeability(self.material, kappa)

    def index(self, kappa: float) -> float:
        """Refractive index n_m = sqrt(eps_m mu_m)."""
        n2 = self.eps(kappa) * self.mu(kappa)
        if not math.isfinite(n2) or n2 <= 0:
            raise ConfigError(f"medium {self.material} has no positive refractive index")
        return math.sqrt(n2)

    @property
    def is_vacuum(self) -> bool:
        return self.material.is_vacuum


def relative_responses(model: MaterialModel, medium: Medium, kappa: float) -> tuple[float, float]:
    """(eps / eps_m, mu / mu_m) seen by amplitude builders inside a medium."""
    return (
        permittivity(model, kappa) / medium.eps(kappa),
        permeability(model, kappa) / medium.mu(kappa),
    )
