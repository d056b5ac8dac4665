"""Okapi BM25 lexical ranking baseline.

score(d, q) = sum over query terms t of
    idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * |d| / avgdl))
with the smoothed, non-negative idf(t) = ln((N - df + 0.5)/(df + 0.5) + 1).

Tokenization is Unicode word segmentation, lowercased, with no stemming
and no stopwords: the corpus is multilingual and language-specific
analyzers would be unsafe. Documents matching no query term are omitted
from the ranking (their score is exactly zero).
"""

from __future__ import annotations

import math
import re
from collections import Counter
from typing import Mapping

from .ranked import RankedList

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75


def tokenize(text: str) -> list[str]:
    return [t.lower() for t in _TOKEN_RE.findall(text)]


class Bm25Index:
    """Inverted index over a document collection, reusable across queries."""

    def __init__(self, corpus_texts: Mapping[str, str],
                 k1: float = DEFAULT_K1, b: float = DEFAULT_B):
        self.k1 = k1
        self.b = b
        self.doc_ids = sorted(corpus_texts)
        self._tf: dict[str, Counter] = {}
        self._doc_len: dict[str, int] = {}
        df: Counter = Counter()
        for doc_id in self.doc_ids:
            tokens = tokenize(corpus_texts[doc_id])
            counts = Counter(tokens)
            self._tf[doc_id] = counts
            self._doc_len[doc_id] = len(tokens)
            df.update(counts.keys())
        n = len(self.doc_ids)
        self._postings: dict[str, list[str]] = {term: [] for term in df}
        for doc_id in self.doc_ids:
            for term in self._tf[doc_id]:
                self._postings[term].append(doc_id)
        self._idf = {
            term: math.log((n - term_df + 0.5) / (term_df + 0.5) + 1.0)
            for term, term_df in df.items()
        }
        total_len = sum(self._doc_len.values())
        self._avgdl = total_len / n if n else 0.0

    def __len__(self) -> int:
        return len(self.doc_ids)

    def score(self, doc_id: str, query_terms: list[str]) -> float:
        tf = self._tf[doc_id]
        dl = self._doc_len[doc_id]
        norm = self.k1 * (1.0 - self.b + self.b * dl / self._avgdl)
        total = 0.0
        for term in query_terms:
            freq = tf.get(term, 0)
            if freq == 0:
                continue
            total += self._idf[term] * freq * (self.k1 + 1.0) / (freq + norm)
        return total

    def rank(self, query: str, k: int, query_id: str = "") -> RankedList:
        """Top-k matching documents; empty when the query shares no terms."""
        if k < 1:
            raise ValueError("k must be >= 1")
        terms = tokenize(query)
        candidates: set[str] = set()
        for term in set(terms):
            candidates.update(self._postings.get(term, ()))
        pairs = [(doc_id, self.score(doc_id, terms)) for doc_id in candidates]
        return RankedList.from_scores(query_id, pairs, k=k)


def bm25_rank(corpus_texts: Mapping[str, str], query: str, k: int,
              k1: float = DEFAULT_K1, b: float = DEFAULT_B,
              query_id: str = "") -> RankedList:
    """Build a throwaway index and rank; prefer Bm25Index for repeated queries."""
    if not query or not query.strip():
        raise ValueError("query must be non-empty")
    return Bm25Index(corpus_texts, k1=k1, b=b).rank(query, k, query_id=query_id)
