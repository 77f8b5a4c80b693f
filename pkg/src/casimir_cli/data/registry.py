"""Built-in material names."""

from collections.abc import Callable

from ..errors import ConfigError
from ..physics.materials import MaterialModel, perfect_conductor, vacuum
from ..search.fuzzy import did_you_mean

BUILTIN_MATERIALS: dict[str, Callable[[], MaterialModel]] = {
    "vacuum": vacuum,
    "pec": perfect_conductor,
    "perfect_conductor": perfect_conductor,
}


def builtin_material(name: str) -> MaterialModel:
    try:
        return BUILTIN_MATERIALS[name]()
    except KeyError:
        raise ConfigError(f"unknown material {name!r}; {did_you_mean(name, BUILTIN_MATERIALS)}") from None
