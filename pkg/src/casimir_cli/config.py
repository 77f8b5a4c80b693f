"""User defaults for casimir-cli."""

import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

from platformdirs import user_config_dir

from .errors import ConfigError

CONFIG_DIR = Path(user_config_dir("casimir-cli"))
CONFIG_FILE = CONFIG_DIR / "config.toml"
THREADS_ENV = "CASIMIR_THREADS"
LENGTH_UNITS = ("nm", "um", "mm", "m")

# key -> type of the stored value
DEFAULT_KEYS: dict[str, type] = {
    "rtol": float,
    "lmax_cap": int,
    "threads": int,
    "length_unit": str,
}


def get_config_path() -> Path:
    return CONFIG_FILE


def load_config() -> dict:
    if not CONFIG_FILE.exists():
        return {}
    try:
        with open(CONFIG_FILE, "rb") as f:
            return tomllib.load(f)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot read {CONFIG_FILE}: {exc}") from exc


def save_config(config: dict) -> None:
    CONFIG_DIR.mkdir(parents=True, exist_ok=True)
    lines = []
    for key, value in config.items():
        if isinstance(value, str):
            lines.append(f'{key} = "{value}"')
        elif isinstance(value, bool):
            lines.append(f"{key} = {'true' if value else 'false'}")
        elif isinstance(value, int | float):
            lines.append(f"{key} = {value!r}")
    CONFIG_FILE.write_text("\n".join(lines) + "\n")


def parse_default(key: str, raw: str):
    """Convert a command-line string to the stored type of ``key``."""
    if key not in DEFAULT_KEYS:
        raise ConfigError(f"unknown setting {key!r}; known: {', '.join(DEFAULT_KEYS)}")
    kind = DEFAULT_KEYS[key]
    try:
        value = kind(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} expects a {kind.__name__}, got {raw!r}") from exc
    if kind is not str and value <= 0:
        raise ConfigError(f"{key} must be positive")
    if key == "length_unit" and value not in LENGTH_UNITS:
        raise ConfigError(f"length_unit must be one of {', '.join(LENGTH_UNITS)}")
    return value


def get_default(key: str, fallback=None):
    return load_config().get(key, fallback)


def set_default(key: str, raw: str) -> None:
    config = load_config()
    config[key] = parse_default(key, raw)
    save_config(config)


def clear_default(key: str | None = None) -> None:
    """Remove one setting, or all of them when ``key`` is None."""
    if key is not None and key not in DEFAULT_KEYS:
        raise ConfigError(f"unknown setting {key!r}; known: {', '.join(DEFAULT_KEYS)}")
    config = load_config() if key else {}
    config.pop(key, None)
    save_config(config)


def thread_count(threads: int | None = None) -> int:
    """Worker threads: explicit value > $CASIMIR_THREADS > config > CPU count."""
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from exc
    configured = get_default("threads")
    if configured:
        return max(1, int(configured))
    return os.cpu_count() or 1
