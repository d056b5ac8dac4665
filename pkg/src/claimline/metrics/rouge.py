"""ROUGE-L summary overlap metric.

Tokens are lowercased Unicode words; no stemming, no stopword removal,
which keeps the metric deterministic and language-neutral. L is the
length of the longest common subsequence of tokens; precision is
L/|candidate|, recall L/|reference|, and F1 their harmonic mean.
"""

from __future__ import annotations

import re
import warnings

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)


def _tokens(text: str) -> list[str]:
    return [t.lower() for t in _TOKEN_RE.findall(text)]


def lcs_length(a: list[str], b: list[str]) -> int:
    """Longest common subsequence length, two-row dynamic program."""
    if not a or not b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    previous = [0] * (len(b) + 1)
    current = [0] * (len(b) + 1)
    for i in range(1, len(a) + 1):
        ai = a[i - 1]
        for j in range(1, len(b) + 1):
            if ai == b[j - 1]:
                current[j] = previous[j - 1] + 1
            else:
                current[j] = max(previous[j], current[j - 1])
        previous, current = current, previous
    return previous[len(b)]


def rouge_l(candidate: str, reference: str) -> tuple[float, float, float]:
    """(precision, recall, F1); (0, 0, 0) with a warning on empty input."""
    cand = _tokens(candidate)
    ref = _tokens(reference)
    if not cand or not ref:
        warnings.warn("rouge_l: input empty after tokenization", RuntimeWarning,
                      stacklevel=2)
        return 0.0, 0.0, 0.0
    lcs = lcs_length(cand, ref)
    precision = lcs / len(cand)
    recall = lcs / len(ref)
    if precision + recall == 0.0:
        return 0.0, 0.0, 0.0
    f1 = 2.0 * precision * recall / (precision + recall)
    return precision, recall, f1
