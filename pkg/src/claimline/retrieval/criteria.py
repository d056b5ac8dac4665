"""Two-step criteria-based retrieval.

Each fact-check gets a rendered metadata card (claim, language, date,
organization) that is embedded separately from the bare claim. A query
then runs in two steps: (1) keep the ids whose card similarity to the
natural-language criterion strictly exceeds the pre-filter threshold;
(2) rank the survivors by claim similarity to the post text.

The symbolic counterpart, reference_filtered_rank, replaces step 1 with
an explicit predicate over fact-check records and serves as the ground
truth when evaluating how well the embedding pre-filter tracks it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..corpus.types import Corpus, FactCheck
from ..embedding.provider import Embedder
from .index import VectorIndex
from .ranked import RankedList

# English names for the language codes that occur in fact-check corpora;
# unknown codes fall back to the raw code.
LANGUAGE_NAMES = {
    "ar": "Arabic", "ara": "Arabic",
    "bg": "Bulgarian", "bul": "Bulgarian",
    "bn": "Bengali", "ben": "Bengali",
    "ca": "Catalan", "cat": "Catalan",
    "cs": "Czech", "ces": "Czech",
    "de": "German", "deu": "German",
    "el": "Greek", "ell": "Greek",
    "en": "English", "eng": "English",
    "es": "Spanish", "spa": "Spanish",
    "fi": "Finnish", "fin": "Finnish",
    "fr": "French", "fra": "French",
    "hbs": "Serbo-Croatian", "hr": "Croatian", "sr": "Serbian", "srp": "Serbian",
    "hi": "Hindi", "hin": "Hindi",
    "hu": "Hungarian", "hun": "Hungarian",
    "id": "Indonesian", "ind": "Indonesian",
    "it": "Italian", "ita": "Italian",
    "ko": "Korean", "kor": "Korean",
    "ms": "Malay", "msa": "Malay",
    "my": "Burmese", "mya": "Burmese",
    "nl": "Dutch", "nld": "Dutch",
    "pl": "Polish", "pol": "Polish",
    "pt": "Portuguese", "por": "Portuguese",
    "ro": "Romanian", "ron": "Romanian",
    "ru": "Russian", "rus": "Russian",
    "sk": "Slovak", "slk": "Slovak",
    "sl": "Slovenian", "slv": "Slovenian",
    "th": "Thai", "tha": "Thai",
    "tr": "Turkish", "tur": "Turkish",
    "uk": "Ukrainian", "ukr": "Ukrainian",
    "zh": "Chinese", "zho": "Chinese",
}


def language_name(code: str) -> str:
    """English name for a language code, falling back to the code itself."""
    if code in LANGUAGE_NAMES:
        return LANGUAGE_NAMES[code]
    primary = code.split("-", 1)[0]
    return LANGUAGE_NAMES.get(primary, code)


def render_criteria_template(fc: FactCheck) -> str:
    """Deterministic four-line metadata card for one fact-check."""
    date_str = fc.published_date.isoformat() if fc.published_date else "unknown"
    return (
        f"Claim: {fc.claim_text}\n"
        f"Language: {language_name(fc.language)}\n"
        f"Date: {date_str}\n"
        f"Organization: {fc.organization or 'unknown'}"
    )


@dataclass(frozen=True)
class CriteriaQuery:
    """A natural-language criterion plus the post to rank survivors by.

    The threshold is inclusive of the [0, 1] endpoints so that degenerate
    settings (keep everything / keep nothing) remain expressible; the
    comparison itself is strict (similarity must exceed the threshold).
    """

    criteria_text: str
    post_text: str
    prefilter_threshold: float = 0.8
    k: int = 10

    def __post_init__(self):
        if not (0.0 <= self.prefilter_threshold <= 1.0):
            raise ValueError("prefilter_threshold must be within [0, 1]")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.criteria_text.strip() or not self.post_text.strip():
            raise ValueError("criteria_text and post_text must be non-empty")


def criteria_retrieve(index_meta: VectorIndex, index_claim: VectorIndex,
                      q: CriteriaQuery, embedder: Embedder,
                      query_id: str = "") -> RankedList:
    """Pre-filter on the metadata cards, then rank survivors by the post.

    When nothing clears the threshold the result is empty and carries a
    diagnostic with the highest similarity observed.
    """
    if set(index_meta.ids) != set(index_claim.ids):
        raise ValueError("metadata and claim indexes must cover the same ids")
    if len(index_meta) == 0:
        return RankedList(query_id=query_id, items=[], diagnostic="index is empty")
    criteria_vec, post_vec = embedder.embed_batch([q.criteria_text, q.post_text])
    sims = index_meta.scores(criteria_vec)
    keep = sims > q.prefilter_threshold
    survivors = [index_meta.ids[row] for row in np.flatnonzero(keep)]
    if not survivors:
        return RankedList(
            query_id=query_id, items=[],
            diagnostic=(
                f"no fact-check above threshold {q.prefilter_threshold}; "
                f"max similarity {float(sims.max()):.4f}"
            ),
        )
    return index_claim.rank_subset(post_vec, survivors, k=q.k, query_id=query_id)


def reference_filtered_rank(corpus: Corpus,
                            manual_filter: Callable[[FactCheck], bool],
                            post_text: str, embedder: Embedder,
                            index_claim: VectorIndex,
                            k: int | None = None,
                            query_id: str = "") -> RankedList:
    """Rank exactly the fact-checks passing a hand-written predicate."""
    subset = [
        fc_id for fc_id in index_claim.ids
        if fc_id in corpus.fact_checks and manual_filter(corpus.fact_checks[fc_id])
    ]
    if not subset:
        return RankedList(query_id=query_id, items=[],
                          diagnostic="manual filter matched no fact-checks")
    post_vec = embedder.embed_batch([post_text])[0]
    return index_claim.rank_subset(post_vec, subset, k=k, query_id=query_id)
