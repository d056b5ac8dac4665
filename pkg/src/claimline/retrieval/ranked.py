"""Ranked result lists, the currency of retrieval and metric operations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


@dataclass
class RankedList:
    """Ordered (factcheck_id, score) pairs for one query.

    Invariants: scores non-increasing, ids unique, equal scores ordered by
    ascending id. Use from_scores to build from unordered pairs.
    """

    query_id: str
    items: list[tuple[str, float]] = field(default_factory=list)
    diagnostic: str | None = field(default=None, compare=False)

    def __post_init__(self):
        seen: set[str] = set()
        prev: tuple[float, str] | None = None
        for fc_id, score in self.items:
            if fc_id in seen:
                raise ValueError(f"duplicate id in ranked list: {fc_id!r}")
            seen.add(fc_id)
            if prev is not None:
                prev_score, prev_id = prev
                if score > prev_score or (score == prev_score and fc_id < prev_id):
                    raise ValueError("ranked list not sorted by (score desc, id asc)")
            prev = (score, fc_id)

    @classmethod
    def from_scores(cls, query_id: str, pairs: Iterable[tuple[str, float]],
                    k: int | None = None, diagnostic: str | None = None) -> "RankedList":
        """Sort pairs into ranking order and optionally truncate to k."""
        ordered = sorted(pairs, key=lambda p: (-p[1], p[0]))
        if k is not None:
            ordered = ordered[:k]
        return cls(query_id=query_id, items=[(i, float(s)) for i, s in ordered],
                   diagnostic=diagnostic)

    def ids(self) -> list[str]:
        return [fc_id for fc_id, _ in self.items]

    def top(self, k: int) -> "RankedList":
        return RankedList(query_id=self.query_id, items=self.items[:k],
                          diagnostic=self.diagnostic)

    def __len__(self) -> int:
        return len(self.items)
