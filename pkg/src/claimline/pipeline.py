"""The four-stage verification pipeline for a single query.

retrieve -> filter -> summarize -> predict, producing a partition of the
retrieved candidates into relevant (with summaries and explanations) and
irrelevant (with scores), a verdict with its label distribution, and
per-stage timings. When the chat provider fails and degraded mode is
enabled, the retrieval results are still returned with an Unverifiable
verdict so the tool stays useful as a plain retriever.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .corpus.types import Corpus, FactCheck, Post, VeracityLabel
from .embedding.provider import Embedder
from .llm.provider import ChatClient, ChatError
from .llm.stages import (
    FilterResult,
    VeracityVerdict,
    filter_candidates,
    format_context,
    predict_veracity,
    summarize,
)
from .llm.templates import TemplateSet
from .retrieval.index import VectorIndex, top_k
from .retrieval.ranked import RankedList

DEFAULT_TOP_K = 50


@dataclass
class RelevantItem:
    factcheck: FactCheck
    summary: str
    relevance_explanation: str


@dataclass
class IrrelevantItem:
    factcheck: FactCheck
    score: float


@dataclass
class PipelineOutput:
    """Everything one verification run produced."""

    query_text: str
    retrieved: RankedList
    relevant: list[RelevantItem]
    irrelevant: list[IrrelevantItem]
    verdict: VeracityVerdict
    overall_summary: str
    timing_ms: dict[str, float]
    degraded: bool = False
    warnings: list[str] = field(default_factory=list)


def summarize_factcheck(chat: ChatClient, fc: FactCheck, templates: TemplateSet,
                        order: str = "article_first") -> str:
    """Summary for one fact-check; empty when there is no article text."""
    if not fc.article_text or not fc.article_text.strip():
        return ""
    return summarize(chat, fc.article_text, order, templates)


def run_pipeline(text: str, *, corpus: Corpus, index: VectorIndex,
                 embedder: Embedder, chat: ChatClient | None,
                 templates: TemplateSet, top_k_n: int = DEFAULT_TOP_K,
                 degraded_enabled: bool = True,
                 with_overall_summary: bool = True,
                 query_id: str = "") -> PipelineOutput:
    """Run the full pipeline for one query text."""
    timing: dict[str, float] = {}
    warnings: list[str] = []

    started = time.perf_counter()
    query_vec = embedder.embed_batch([text])[0]
    retrieved = top_k(index, query_vec, top_k_n, query_id=query_id)
    timing["retrieve_ms"] = (time.perf_counter() - started) * 1000.0

    candidates = [corpus.fact_checks[fc_id] for fc_id in retrieved.ids()]
    scores = dict(retrieved.items)
    post = Post(id=query_id or "query", text=text, language="und")

    def degraded_output(reason: str) -> PipelineOutput:
        warnings.append(reason)
        verdict = VeracityVerdict(
            label=VeracityLabel.UNVERIFIABLE,
            explanation="Generative providers unavailable; retrieval results only.",
            distribution={},
        )
        return PipelineOutput(
            query_text=text, retrieved=retrieved, relevant=[],
            irrelevant=[IrrelevantItem(fc, scores[fc.id]) for fc in candidates],
            verdict=verdict, overall_summary="", timing_ms=timing,
            degraded=True, warnings=warnings,
        )

    if chat is None:
        if degraded_enabled:
            return degraded_output("chat provider not configured")
        raise ChatError("chat provider not configured and degraded mode disabled")

    started = time.perf_counter()
    try:
        if candidates:
            filter_result = filter_candidates(chat, post, candidates, templates)
        else:
            filter_result = FilterResult(relevant=[], considered=[])
    except ChatError as exc:
        timing["filter_ms"] = (time.perf_counter() - started) * 1000.0
        if degraded_enabled:
            return degraded_output(f"filtration failed: {exc}")
        raise
    timing["filter_ms"] = (time.perf_counter() - started) * 1000.0
    warnings.extend(filter_result.warnings)

    explanation_of = dict(filter_result.relevant)
    kept_ids = set(filter_result.relevant_ids())

    started = time.perf_counter()
    relevant_items: list[RelevantItem] = []
    try:
        for fc in candidates:
            if fc.id in kept_ids:
                relevant_items.append(RelevantItem(
                    factcheck=fc,
                    summary=summarize_factcheck(chat, fc, templates),
                    relevance_explanation=explanation_of.get(fc.id, ""),
                ))
    except ChatError as exc:
        timing["summarize_ms"] = (time.perf_counter() - started) * 1000.0
        if degraded_enabled:
            return degraded_output(f"summarization failed: {exc}")
        raise
    timing["summarize_ms"] = (time.perf_counter() - started) * 1000.0

    irrelevant_items = [
        IrrelevantItem(fc, scores[fc.id]) for fc in candidates if fc.id not in kept_ids
    ]

    started = time.perf_counter()
    try:
        triples = [
            (item.factcheck, item.summary, item.factcheck.rating)
            for item in relevant_items
        ]
        verdict = predict_veracity(chat, post, triples, templates)
        overall = ""
        if with_overall_summary:
            overall = chat.chat(templates.render(
                "overall_summary", post=text, context=format_context(triples),
            )).strip()
    except ChatError as exc:
        timing["verdict_ms"] = (time.perf_counter() - started) * 1000.0
        if degraded_enabled:
            return degraded_output(f"veracity prediction failed: {exc}")
        raise
    timing["verdict_ms"] = (time.perf_counter() - started) * 1000.0

    return PipelineOutput(
        query_text=text, retrieved=retrieved, relevant=relevant_items,
        irrelevant=irrelevant_items, verdict=verdict, overall_summary=overall,
        timing_ms=timing, degraded=False, warnings=warnings,
    )
