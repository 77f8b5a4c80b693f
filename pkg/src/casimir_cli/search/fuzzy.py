"""Fuzzy "did you mean" suggestions for names typed by the user."""

from collections.abc import Iterable
from dataclasses import dataclass

from rapidfuzz import fuzz, process


@dataclass
class Suggestion:
    """A candidate name with its match score."""

    name: str
    score: float


class NameSearch:
    """Fuzzy lookup over a fixed set of names (materials, suites, parameters)."""

    def __init__(self, choices: Iterable[str]):
        self._choices: list[str] = sorted(set(choices))

    @property
    def choices(self) -> list[str]:
        return list(self._choices)

    def search(self, query: str, limit: int = 3, score_cutoff: float = 60.0) -> list[Suggestion]:
        """Names close to ``query``.

        Args:
            query: The name as typed.
            limit: Maximum number of results.
            score_cutoff: Minimum score (0-100) to include in results.

        Returns:
            Suggestions sorted by score.
        """
        if not self._choices or not query:
            return []
        results = process.extract(
            query,
            self._choices,
            scorer=fuzz.WRatio,
            limit=limit,
            score_cutoff=score_cutoff,
        )
        return [Suggestion(name=name, score=score) for name, score, _ in results]


def did_you_mean(query: str, choices: Iterable[str]) -> str:
    """Message suffix naming the closest choices, or listing all of them."""
    search = NameSearch(choices)
    found = search.search(query)
    if found:
        return "did you mean " + " or ".join(repr(s.name) for s in found) + "?"
    return "choose from " + ", ".join(search.choices)
