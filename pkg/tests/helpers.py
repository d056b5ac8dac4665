"""Shared test helpers: fixture corpora, scripted chat handlers, and
controlled-similarity vector fixtures."""

from __future__ import annotations

import math
import re
from datetime import date

import numpy as np

from claimline.corpus.types import Corpus, FactCheck, Post, VeracityLabel
from claimline.embedding.provider import Embedder, EmbedderSpec, stub_vector
from claimline.embedding.vectors import EmbeddingVector
from claimline.llm.provider import ChatClient, ChatSpec
from claimline.llm.templates import load_templates
from claimline.retrieval.index import VectorIndex

STUB_EMBEDDER_SPEC = EmbedderSpec(kind="stub", model_name="stub-e5", dim=32)
STUB_CHAT_SPEC = ChatSpec(kind="stub", model_name="stub-llm")

_TEMPLATES = load_templates()
_FILTRATION_SIG = _TEMPLATES["filtration"].body.split("{")[0].strip()[:40]
_VERACITY_SIG = _TEMPLATES["veracity_with_context"].body.split("{")[0].strip()[:40]
_BASELINE_SIG = _TEMPLATES["veracity_baseline"].body.split("{")[0].strip()[:40]
_OVERALL_SIG = _TEMPLATES["overall_summary"].body.split("{")[0].strip()[:40]

_POST_BLOCK_RE = re.compile(r"Post:\n(.*?)\n\n", re.DOTALL)
_CANDIDATE_LINE_RE = re.compile(r"^(\d+)\. (.*)$", re.MULTILINE)


def make_stub_embedder(dim: int = 32, model_name: str = "stub-e5") -> Embedder:
    return Embedder(EmbedderSpec(kind="stub", model_name=model_name, dim=dim))


def make_chat(handler=None, fixtures=None, default_reply=None) -> ChatClient:
    return ChatClient(STUB_CHAT_SPEC, handler=handler, fixtures=fixtures,
                      default_reply=default_reply)


def build_fixture_corpus(languages=("en", "es", "de"), per_language: int = 6,
                         posts_per_language: int = 2) -> Corpus:
    """Deterministic corpus where each post's text equals its linked claim.

    With the hash-seeded stub embedder this guarantees the linked
    fact-check is the nearest neighbour of its post (cosine exactly 1).
    """
    fact_checks: dict[str, FactCheck] = {}
    posts: dict[str, Post] = {}
    ratings = [VeracityLabel.FALSE, VeracityLabel.TRUE, VeracityLabel.UNVERIFIABLE]
    for lang in languages:
        for i in range(per_language):
            fc_id = f"fc-{lang}-{i}"
            claim = f"The {lang} claim number {i} about subject {i} is circulating."
            fact_checks[fc_id] = FactCheck(
                id=fc_id,
                claim_text=claim,
                claim_english=f"English rendering of {lang} claim {i}.",
                language=lang,
                rating=ratings[i % 3],
                rating_raw=ratings[i % 3].value.lower(),
                published_date=date(2021, 1 + (i % 12), 1 + i),
                organization=f"org-{lang}",
                article_url=f"https://example.org/{fc_id}",
                article_text=(
                    f"Full fact-checking article for {lang} claim {i}. "
                    f"It examines the claim in detail and reaches a conclusion."
                ),
                reference_summary=f"Resumen {lang} {i}.",
                reference_summary_english=f"Reference summary for {lang} claim {i}.",
            )
        for j in range(posts_per_language):
            post_id = f"post-{lang}-{j}"
            linked = f"fc-{lang}-{j}"
            posts[post_id] = Post(
                id=post_id,
                text=fact_checks[linked].claim_text,
                language=lang,
                veracity=ratings[j % 3],
                linked_factcheck_ids=frozenset({linked}),
            )
    corpus, warnings = Corpus.build(fact_checks, posts)
    assert not warnings
    return corpus


def controlled_meta_index(criteria_vec, similarities, dim=32):
    """Metadata index whose cosine to criteria_vec is exactly as requested."""
    c = criteria_vec.values.astype(np.float64)
    rng = np.random.default_rng(99)
    entries = []
    for i, sim in enumerate(similarities):
        raw = rng.standard_normal(dim)
        ortho = raw - np.dot(raw, c) * c
        ortho /= np.linalg.norm(ortho)
        v = sim * c + math.sqrt(max(0.0, 1.0 - sim * sim)) * ortho
        v = (v / np.linalg.norm(v)).astype(np.float32)
        entries.append((f"id{i:03d}", EmbeddingVector(v).unit()))
    return VectorIndex.from_entries(entries, "m")


def criteria_fixture(n=50, dim=32):
    """(embedder, meta index, claim index, sims) for two-step retrieval tests.

    Card similarities are spread over (0, 1) away from the 0.5/0.8
    threshold boundaries so strict-inequality behaviour is unambiguous.
    """
    embedder = Embedder(EmbedderSpec(kind="stub", model_name="crit", dim=dim))
    criteria_vec = embedder.embed_batch(["Fact-checks written in Spanish"])[0]
    sims = [0.01 + 0.97 * i / (n - 1) for i in range(n)]
    index_meta = controlled_meta_index(criteria_vec, sims, dim)
    claim_entries = [
        (f"id{i:03d}", EmbeddingVector(stub_vector(f"claim {i}", dim), normalized=True))
        for i in range(n)
    ]
    index_claim = VectorIndex.from_entries(claim_entries, "m")
    return embedder, index_meta, index_claim, sims


def criteria_oracle(embedder, index_meta, index_claim, q):
    """Manual filter + sort: survivors by cosine, ranked by the post vector."""
    from claimline.embedding.vectors import cosine

    criteria_vec, post_vec = embedder.embed_batch([q.criteria_text, q.post_text])
    survivors = [
        fc_id for fc_id in index_meta.ids
        if cosine(criteria_vec, index_meta.vector(fc_id)) > q.prefilter_threshold
    ]
    pairs = [(fc_id, cosine(post_vec, index_claim.vector(fc_id))) for fc_id in survivors]
    return sorted(pairs, key=lambda p: (-p[1], p[0]))[: q.k]


class PipelineChatHandler:
    """Scripted model standing in for an LLM across all pipeline stages.

    Dispatches on the default prompt templates and answers from fixture
    knowledge: which candidates to keep, which label to emit, and what a
    summary should say.
    """

    def __init__(self, corpus: Corpus, keep: str = "oracle",
                 label: str | None = None, gold_labels: bool = False,
                 summary: str | None = None):
        self.corpus = corpus
        self.keep = keep  # "oracle" | "all" | "none"
        self.label = label
        self.gold_labels = gold_labels
        self.summary = summary  # None = echo the reference summary
        self.judgments = corpus.judgments()
        self._post_by_text = {p.text: p for p in corpus.posts.values()}
        self._fc_by_display = {fc.display_claim(): fc for fc in corpus.fact_checks.values()}

    def _post_for(self, prompt: str) -> Post | None:
        match = _POST_BLOCK_RE.search(prompt)
        if not match:
            return None
        return self._post_by_text.get(match.group(1))

    def _filtration_reply(self, prompt: str) -> str:
        if self.keep == "none":
            return "none"
        candidates = _CANDIDATE_LINE_RE.findall(prompt)
        if self.keep == "all":
            return "\n".join(f"{num}: kept" for num, _ in candidates)
        post = self._post_for(prompt)
        relevant = self.judgments.get(post.id, set()) if post else set()
        lines = []
        for num, display in candidates:
            fc = self._fc_by_display.get(display)
            if fc is not None and fc.id in relevant:
                lines.append(f"{num}: matches the verified claim")
        return "\n".join(lines) if lines else "none"

    def _veracity_reply(self, prompt: str) -> str:
        label = self.label or "Unverifiable"
        if self.gold_labels:
            post = self._post_for(prompt)
            if post is not None and post.veracity is not None:
                label = post.veracity.value
        return f"Label: {label}\nScripted explanation."

    def _summary_reply(self, prompt: str) -> str:
        if self.summary is not None:
            return self.summary
        for fc in self.corpus.fact_checks.values():
            if fc.article_text and fc.article_text in prompt:
                return fc.reference_summary_english or "No reference available."
        return "Summary of an unknown article."

    def __call__(self, prompt: str) -> str:
        if prompt.startswith(_FILTRATION_SIG):
            return self._filtration_reply(prompt)
        if prompt.startswith(_VERACITY_SIG) or prompt.startswith(_BASELINE_SIG):
            return self._veracity_reply(prompt)
        if prompt.startswith(_OVERALL_SIG):
            return "Scripted overview of the post and its fact-checks."
        return self._summary_reply(prompt)
