"""Geometry descriptions for the built-in two-body configurations.

Distances follow the usual figures: center-to-center for atoms and
cylinder pairs, center-to-surface for a sphere or cylinder opposite a
plate, and surface-to-surface for two plates.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import ClassVar

from ..errors import GeometryError
from ..physics.materials import MaterialModel, perfect_conductor


def _check_mode(geometry) -> None:
    if geometry.mode not in geometry.modes:
        raise GeometryError(
            f"{geometry.variant} has no mode {geometry.mode!r}; choose one of {', '.join(geometry.modes)}"
        )


@dataclass(frozen=True)
class TwoAtoms:
    d: float
    alpha0: float
    d10: float
    mode: str = "full_log"

    variant: ClassVar[str] = "two_atoms"
    modes: ClassVar[tuple[str, ...]] = ("full_log", "quadratic", "general")

    def validate(self) -> None:
        _check_mode(self)
        if self.d <= 0:
            raise GeometryError("atom separation must be positive")
        if self.alpha0 < 0 or self.d10 <= 0:
            raise GeometryError("atoms need alpha0 >= 0 and d10 > 0")

    @property
    def gap(self) -> float:
        return self.d


@dataclass(frozen=True)
class ParallelPlates:
    d: float
    material_a: MaterialModel = field(default_factory=perfect_conductor)
    material_b: MaterialModel = field(default_factory=perfect_conductor)
    mode: str = "lifshitz"

    variant: ClassVar[str] = "parallel_plates"
    modes: ClassVar[tuple[str, ...]] = ("lifshitz", "plane_basis")

    def validate(self) -> None:
        _check_mode(self)
        if self.d <= 0:
            raise GeometryError("plate separation must be positive")

    @property
    def gap(self) -> float:
        return self.d


@dataclass(frozen=True)
class TwoCylindersOuter:
    """Two parallel perfectly conducting cylinders outside each other."""

    radius_a: float
    radius_b: float
    d: float
    mode: str = "specialized"

    variant: ClassVar[str] = "two_cylinders_outer"
    modes: ClassVar[tuple[str, ...]] = ("specialized", "general")

    def validate(self) -> None:
        _check_mode(self)
        if self.radius_a <= 0 or self.radius_b <= 0:
            raise GeometryError("cylinder radii must be positive")
        if self.d <= self.radius_a + self.radius_b:
            raise GeometryError(f"cylinders overlap: d = {self.d:g} <= R_a + R_b = {self.radius_a + self.radius_b:g}")

    @property
    def gap(self) -> float:
        return self.d - self.radius_a - self.radius_b


@dataclass(frozen=True)
class CylinderInCylinder:
    """A perfectly conducting cylinder inside a hollow one.

    The larger radius is the enclosing cylinder whatever its label; ``d``
    is the offset of the axes and may be zero.
    """

    radius_a: float
    radius_b: float
    d: float
    mode: str = "specialized"

    variant: ClassVar[str] = "cylinder_in_cylinder"
    modes: ClassVar[tuple[str, ...]] = ("specialized", "general")

    @property
    def outer_radius(self) -> float:
        return max(self.radius_a, self.radius_b)

    @property
    def inner_radius(self) -> float:
        return min(self.radius_a, self.radius_b)

    def validate(self) -> None:
        _check_mode(self)
        if self.radius_a <= 0 or self.radius_b <= 0:
            raise GeometryError("cylinder radii must be positive")
        if self.d < 0:
            raise GeometryError("axis offset must be non-negative")
        if self.d + self.inner_radius >= self.outer_radius:
            raise GeometryError(
                f"inner cylinder (R = {self.inner_radius:g}) at offset {self.d:g} "
                f"touches the outer one (R = {self.outer_radius:g})"
            )

    @property
    def gap(self) -> float:
        return self.outer_radius - self.inner_radius - self.d


@dataclass(frozen=True)
class SpherePlate:
    radius: float
    d: float
    material_sphere: MaterialModel = field(default_factory=perfect_conductor)
    material_plate: MaterialModel = field(default_factory=perfect_conductor)
    mode: str = "full"

    variant: ClassVar[str] = "sphere_plate"
    modes: ClassVar[tuple[str, ...]] = ("full", "asymptotic")

    def validate(self) -> None:
        _check_mode(self)
        if self.radius <= 0:
            raise GeometryError("sphere radius must be positive")
        if self.d <= self.radius:
            raise GeometryError(f"sphere touches the plate: d = {self.d:g} <= R = {self.radius:g}")

    @property
    def gap(self) -> float:
        return self.d - self.radius


@dataclass(frozen=True)
class CylinderPlate:
    radius: float
    d: float
    material_cylinder: MaterialModel = field(default_factory=perfect_conductor)
    material_plate: MaterialModel = field(default_factory=perfect_conductor)
    mode: str = "full_smallR"

    variant: ClassVar[str] = "cylinder_plate"
    modes: ClassVar[tuple[str, ...]] = (
        "asymptotic_dielectric",
        "asymptotic_pec_plate",
        "asymptotic_pec_cylinder",
        "full_smallR",
        "full_pec_logmode",
    )

    def validate(self) -> None:
        _check_mode(self)
        if self.radius <= 0:
            raise GeometryError("cylinder radius must be positive")
        if self.d <= self.radius:
            raise GeometryError(f"cylinder touches the plate: d = {self.d:g} <= R = {self.radius:g}")

    @property
    def gap(self) -> float:
        return self.d - self.radius


GeometryConfig = TwoAtoms | ParallelPlates | TwoCylindersOuter | CylinderInCylinder | SpherePlate | CylinderPlate

VARIANTS: dict[str, type] = {
    cls.variant: cls
    for cls in (TwoAtoms, ParallelPlates, TwoCylindersOuter, CylinderInCylinder, SpherePlate, CylinderPlate)
}


def with_parameter(geometry: GeometryConfig, name: str, value: float) -> GeometryConfig:
    """Copy of ``geometry`` with one numeric field replaced (for sweeps)."""
    fields = {f.name for f in dataclasses.fields(geometry)}
    if name not in fields:
        raise GeometryError(f"{geometry.variant} has no parameter {name!r}")
    updated = dataclasses.replace(geometry, **{name: value})
    updated.validate()
    return updated
