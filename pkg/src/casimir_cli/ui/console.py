"""Rich console setup and utilities."""

from rich.console import Console
from rich.theme import Theme

custom_theme = Theme(
    {
        "info": "cyan",
        "warning": "yellow",
        "error": "bold red",
        "success": "bold green",
        "energy": "bold cyan",
        "energy.error": "dim cyan",
        "param": "bold white",
        "check.pass": "bold green",
        "check.fail": "bold red",
    }
)

console = Console(theme=custom_theme)
err_console = Console(theme=custom_theme, stderr=True)


def get_convergence_style(converged: bool) -> str:
    return "success" if converged else "warning"


def get_check_style(passed: bool) -> str:
    return "check.pass" if passed else "check.fail"
