"""Rank agreement between two orderings of fact-check ids.

Both coefficients are computed on the intersection of the two id lists,
each item ranked by its position within its own list restricted to the
common ids. Fewer than two common ids leaves the coefficients undefined
(None). Kendall's tau is the tie-corrected tau-b, computed in
O(n log n) by merge-sort inversion counting.
"""

from __future__ import annotations

import math
from typing import Sequence

from ..retrieval.ranked import RankedList


def fractional_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks with ties receiving the average of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for pos in range(i, j + 1):
            ranks[order[pos]] = avg
        i = j + 1
    return ranks


def _aligned_ranks(rank_a: Sequence[str], rank_b: Sequence[str]) -> tuple[list[float], list[float]]:
    common = set(rank_a) & set(rank_b)
    pos_a = {fc_id: i for i, fc_id in enumerate(i for i in rank_a if i in common)}
    pos_b = {fc_id: i for i, fc_id in enumerate(i for i in rank_b if i in common)}
    ids = sorted(common)
    return (
        fractional_ranks([pos_a[i] for i in ids]),
        fractional_ranks([pos_b[i] for i in ids]),
    )


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    cov = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    var_x = sum((x - mean_x) ** 2 for x in xs)
    var_y = sum((y - mean_y) ** 2 for y in ys)
    if var_x == 0.0 or var_y == 0.0:
        return None
    return cov / math.sqrt(var_x * var_y)


def spearman(rank_a: Sequence[str], rank_b: Sequence[str]) -> float | None:
    """Spearman rho over common ids; None when fewer than two are shared."""
    ra, rb = _aligned_ranks(rank_a, rank_b)
    if len(ra) < 2:
        return None
    return pearson(ra, rb)


def _merge_count(values: list[float]) -> int:
    """Inversions in values, counted by bottom-up merge sort."""
    work = list(values)
    buffer = [0.0] * len(work)
    inversions = 0
    width = 1
    n = len(work)
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if work[j] < work[i]:
                    inversions += mid - i
                    buffer[k] = work[j]
                    j += 1
                else:
                    buffer[k] = work[i]
                    i += 1
                k += 1
            buffer[k:hi] = work[i:mid] if i < mid else work[j:hi]
            work[lo:hi] = buffer[lo:hi]
        width *= 2
    return inversions


def _tie_term(values: Sequence) -> int:
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return sum(c * (c - 1) // 2 for c in counts.values())


def kendall_tau_from_ranks(ra: Sequence[float], rb: Sequence[float]) -> float | None:
    """Tau-b from two aligned rank vectors (ties allowed)."""
    n = len(ra)
    if n < 2:
        return None
    order = sorted(range(n), key=lambda i: (ra[i], rb[i]))
    b_sorted = [rb[i] for i in order]
    n0 = n * (n - 1) // 2
    n1 = _tie_term(ra)
    n2 = _tie_term(rb)
    n3 = _tie_term([(ra[i], rb[i]) for i in range(n)])  # joint ties
    discordant = _merge_count(b_sorted)
    numerator = (n0 - n1 - n2 + n3) - 2 * discordant
    denom = math.sqrt((n0 - n1) * (n0 - n2))
    if denom == 0.0:
        return None
    return numerator / denom


def kendall_tau(rank_a: Sequence[str], rank_b: Sequence[str]) -> float | None:
    """Kendall tau-b over common ids; None when fewer than two are shared."""
    ra, rb = _aligned_ranks(rank_a, rank_b)
    return kendall_tau_from_ranks(ra, rb)


def common_fc_proportion(predicted: RankedList, reference: RankedList,
                         depth: int = 10) -> float:
    """Share of the reference top-`depth` ids present in the predicted top-`depth`."""
    if len(reference) == 0:
        raise ValueError("reference ranking is empty")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    ref_ids = reference.top(depth).ids()
    pred_ids = set(predicted.top(depth).ids())
    return sum(1 for fc_id in ref_ids if fc_id in pred_ids) / len(ref_ids)
