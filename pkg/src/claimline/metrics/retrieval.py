"""Ranking quality: success-at-K and mean reciprocal rank."""

from __future__ import annotations

from typing import Mapping, Sequence, AbstractSet

from ..retrieval.ranked import RankedList

Judgments = Mapping[str, AbstractSet[str]]


def _check(rankings: Sequence[RankedList], judgments: Judgments) -> None:
    if not rankings:
        raise ValueError("no rankings to evaluate")
    for ranking in rankings:
        if ranking.query_id not in judgments:
            raise ValueError(f"no judgments for query {ranking.query_id!r}")
        if not judgments[ranking.query_id]:
            raise ValueError(f"empty judgment set for query {ranking.query_id!r}")


def first_relevant_rank(ranking: RankedList, relevant: AbstractSet[str]) -> int | None:
    """1-based rank of the first relevant id, None when none is retrieved."""
    for position, fc_id in enumerate(ranking.ids(), start=1):
        if fc_id in relevant:
            return position
    return None


def success_at_k(rankings: Sequence[RankedList], judgments: Judgments, k: int) -> float:
    """Fraction of queries with at least one relevant id in the top k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    _check(rankings, judgments)
    hits = 0
    for ranking in rankings:
        rank = first_relevant_rank(ranking, judgments[ranking.query_id])
        if rank is not None and rank <= k:
            hits += 1
    return hits / len(rankings)


def mrr(rankings: Sequence[RankedList], judgments: Judgments) -> float:
    """Mean of 1/rank of the first relevant id; 0 when none is retrieved."""
    _check(rankings, judgments)
    total = 0.0
    for ranking in rankings:
        rank = first_relevant_rank(ranking, judgments[ranking.query_id])
        if rank is not None:
            total += 1.0 / rank
    return total / len(rankings)
