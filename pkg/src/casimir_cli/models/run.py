"""Run configuration files (JSON) validated with pydantic."""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..data.parser import parse_table
from ..data.registry import BUILTIN_MATERIALS, builtin_material
from ..errors import ConfigError
from ..physics.materials import MaterialModel, Medium, constant, drude
from ..search.fuzzy import did_you_mean
from .geometry import VARIANTS, GeometryConfig
from .results import QuadratureSpec, TruncationPolicy

PositiveFloat = Annotated[float, Field(gt=0)]


class MaterialSpec(BaseModel):
    """A named response model declared in the run config."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["vacuum", "pec", "constant", "drude", "tabulated"]
    eps0: PositiveFloat = 1.0
    mu0: float = Field(1.0, ge=0)
    plasma: PositiveFloat | None = Field(None, description="Drude plasma wave number in 1/length_unit")
    damping: float = Field(0.0, ge=0, description="Drude damping in 1/length_unit")
    file: Path | None = Field(None, description="CSV or xlsx table with columns kappa, eps[, mu]")

    @model_validator(mode="after")
    def _check_kind(self) -> MaterialSpec:
        if self.kind == "drude" and self.plasma is None:
            raise ValueError("drude materials need 'plasma'")
        if self.kind == "tabulated" and self.file is None:
            raise ValueError("tabulated materials need 'file'")
        return self

    def build(self, name: str, base_dir: Path | None = None) -> MaterialModel:
        match self.kind:
            case "vacuum" | "pec":
                return builtin_material(self.kind)
            case "constant":
                return constant(self.eps0, self.mu0, name=name)
            case "drude":
                return drude(self.plasma, self.damping, name=name)
            case "tabulated":
                path = self.file if self.file.is_absolute() or base_dir is None else base_dir / self.file
                return parse_table(path, name=name)
        raise AssertionError(self.kind)


class _GeometrySpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    variant: str

    @property
    def material_fields(self) -> dict[str, str]:
        return {k: v for k, v in self if k.startswith("material_")}

    @classmethod
    def numeric_fields(cls) -> list[str]:
        return [name for name, info in cls.model_fields.items() if info.annotation in (float, int)]

    def to_geometry(self, materials: dict[str, MaterialModel]) -> GeometryConfig:
        values = self.model_dump(exclude={"variant"})
        for key, name in self.material_fields.items():
            values[key] = materials[name]
        geometry = VARIANTS[self.variant](**values)
        geometry.validate()
        return geometry


class TwoAtomsSpec(_GeometrySpec):
    variant: Literal["two_atoms"]
    d: PositiveFloat
    alpha0: float = Field(ge=0)
    d10: PositiveFloat
    mode: Literal["full_log", "quadratic", "general"] = "full_log"


class ParallelPlatesSpec(_GeometrySpec):
    variant: Literal["parallel_plates"]
    d: PositiveFloat
    material_a: str = "pec"
    material_b: str = "pec"
    mode: Literal["lifshitz", "plane_basis"] = "lifshitz"


class TwoCylindersOuterSpec(_GeometrySpec):
    variant: Literal["two_cylinders_outer"]
    radius_a: PositiveFloat
    radius_b: PositiveFloat
    d: PositiveFloat
    mode: Literal["specialized", "general"] = "specialized"


class CylinderInCylinderSpec(_GeometrySpec):
    variant: Literal["cylinder_in_cylinder"]
    radius_a: PositiveFloat
    radius_b: PositiveFloat
    d: float = Field(ge=0)
    mode: Literal["specialized", "general"] = "specialized"


class SpherePlateSpec(_GeometrySpec):
    variant: Literal["sphere_plate"]
    radius: PositiveFloat
    d: PositiveFloat
    material_sphere: str = "pec"
    material_plate: str = "pec"
    mode: Literal["full", "asymptotic"] = "full"


class CylinderPlateSpec(_GeometrySpec):
    variant: Literal["cylinder_plate"]
    radius: PositiveFloat
    d: PositiveFloat
    material_cylinder: str = "pec"
    material_plate: str = "pec"
    mode: Literal[
        "asymptotic_dielectric",
        "asymptotic_pec_plate",
        "asymptotic_pec_cylinder",
        "full_smallR",
        "full_pec_logmode",
    ] = "full_smallR"


GeometrySpec = Annotated[
    TwoAtomsSpec
    | ParallelPlatesSpec
    | TwoCylindersOuterSpec
    | CylinderInCylinderSpec
    | SpherePlateSpec
    | CylinderPlateSpec,
    Field(discriminator="variant"),
]


class NumericsSpec(BaseModel):
    """Overrides of the quadrature and truncation defaults."""

    model_config = ConfigDict(extra="forbid")

    rtol: PositiveFloat | None = None
    initial_nodes: int | None = Field(None, ge=2)
    max_levels: int | None = Field(None, ge=1)
    lmax_initial: int | None = Field(None, ge=1)
    lmax_increment: int | None = Field(None, ge=1)
    lmax_rtol: PositiveFloat | None = None
    lmax_cap: int | None = Field(None, ge=1)

    def quadrature(self, rtol: float | None = None) -> QuadratureSpec:
        values = {
            "initial_nodes": self.initial_nodes,
            "max_levels": self.max_levels,
            "rtol": rtol if rtol is not None else self.rtol,
        }
        return QuadratureSpec(**{k: v for k, v in values.items() if v is not None})

    def truncation(self, base: TruncationPolicy | None, cap: int | None = None) -> TruncationPolicy | None:
        """``base`` with the configured overrides applied (None stays None)."""
        if base is None:
            return None
        cap = cap if cap is not None else self.lmax_cap if self.lmax_cap is not None else base.cap
        initial = self.lmax_initial if self.lmax_initial is not None else base.initial
        return dataclasses.replace(
            base,
            initial=min(initial, cap),
            cap=cap,
            increment=self.lmax_increment or base.increment,
            rtol=self.lmax_rtol or base.rtol,
        )


class SweepSpec(BaseModel):
    """A parameter grid, given explicitly or as start/stop/num."""

    model_config = ConfigDict(extra="forbid")

    parameter: str
    values: list[float] | None = None
    start: float | None = None
    stop: float | None = None
    num: int | None = Field(None, ge=1)
    spacing: Literal["linear", "log"] = "linear"

    @model_validator(mode="after")
    def _check_grid(self) -> SweepSpec:
        if self.values is None:
            if self.start is None or self.stop is None or self.num is None:
                raise ValueError("give either 'values' or 'start', 'stop' and 'num'")
            if self.spacing == "log" and (self.start <= 0 or self.stop <= 0):
                raise ValueError("log spacing needs positive 'start' and 'stop'")
        grid = self.grid()
        if grid.size == 0:
            raise ValueError("sweep grid is empty")
        steps = np.diff(grid)
        if grid.size > 1 and not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError("sweep grid must be strictly monotone")
        return self

    def grid(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.num)
        return np.linspace(self.start, self.stop, self.num)


class OutputSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    path: Path | None = None
    format: Literal["csv", "json"] = "csv"


class RunConfig(BaseModel):
    """One energy computation or sweep."""

    model_config = ConfigDict(extra="forbid")

    geometry: GeometrySpec
    materials: dict[str, MaterialSpec] = Field(default_factory=dict)
    length_unit: Literal["nm", "um", "mm", "m"] | None = None
    beta: PositiveFloat | None = Field(None, description="hbar c / (k_B T) in length units; omit for T = 0")
    medium: str | None = Field(None, description="material filling the gap")
    numerics: NumericsSpec = Field(default_factory=NumericsSpec)
    sweep: SweepSpec | None = None
    output: OutputSpec = Field(default_factory=OutputSpec)

    @model_validator(mode="after")
    def _check_references(self) -> RunConfig:
        known = set(self.materials) | set(BUILTIN_MATERIALS)
        references = {f"geometry.{k}": v for k, v in self.geometry.material_fields.items()}
        if self.medium is not None:
            references["medium"] = self.medium
        for where, name in references.items():
            if name not in known:
                raise ValueError(f"{where}: material {name!r} is not defined; {did_you_mean(name, known)}")
        if self.sweep is not None:
            numeric = type(self.geometry).numeric_fields()
            if self.sweep.parameter not in numeric:
                raise ValueError(
                    f"sweep.parameter: {self.geometry.variant} has no numeric parameter "
                    f"{self.sweep.parameter!r}; {did_you_mean(self.sweep.parameter, numeric)}"
                )
        return self

    def build_materials(self, base_dir: Path | None = None) -> dict[str, MaterialModel]:
        built = {name: factory() for name, factory in BUILTIN_MATERIALS.items()}
        for name, spec in self.materials.items():
            built[name] = spec.build(name, base_dir)
        return built

    def to_geometry(self, base_dir: Path | None = None) -> GeometryConfig:
        return self.geometry.to_geometry(self.build_materials(base_dir))

    def to_medium(self, base_dir: Path | None = None) -> Medium:
        if self.medium is None:
            return Medium()
        return Medium(self.build_materials(base_dir)[self.medium])


def format_validation_error(exc: ValidationError) -> str:
    """One ``dotted.path: message`` line per error."""
    lines = []
    for error in exc.errors():
        path = ".".join(str(part) for part in error["loc"])
        message = error["msg"].removeprefix("Value error, ")
        lines.append(f"{path}: {message}" if path else message)
    return "\n".join(lines)


def parse_run_config(data: dict[str, Any] | str) -> RunConfig:
    """Validate a JSON document (text or parsed) into a RunConfig."""
    try:
        if isinstance(data, str):
            return RunConfig.model_validate_json(data)
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(format_validation_error(exc)) from exc


def load_run_config(path: Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read run config {path}: {exc}") from exc
    return parse_run_config(text)


def run_config_schema() -> str:
    return json.dumps(RunConfig.model_json_schema(), indent=2)
