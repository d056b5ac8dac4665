"""Generative pipeline stages: filtration, summarization, veracity.

Reply parsing is total: every possible model reply maps to a structured
result plus zero or more warnings. Replies that ignore the requested
format degrade to conservative values (empty selection, Unverifiable)
instead of raising.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from ..corpus.types import FactCheck, Post, VeracityLabel
from .provider import ChatClient
from .templates import TemplateSet

MAX_FILTER_CANDIDATES = 50

_SELECTION_LINE_RE = re.compile(r"^\s*(\d+)\s*[:.)\-]\s*(.*)$")
_INT_RE = re.compile(r"\d+")
_LABEL_LINE_RE = re.compile(r"^\s*label\s*[:\-]\s*(.+)$", re.IGNORECASE)
_LABEL_WORD_RE = re.compile(r"\b(true|false|unverifiable)\b", re.IGNORECASE)


@dataclass
class FilterResult:
    """LLM-selected relevant candidates, in candidate order."""

    relevant: list[tuple[str, str]]  # (factcheck_id, explanation)
    considered: list[str]
    warnings: list[str] = field(default_factory=list)

    def relevant_ids(self) -> list[str]:
        return [fc_id for fc_id, _ in self.relevant]


@dataclass
class VeracityVerdict:
    label: VeracityLabel
    explanation: str
    distribution: dict[VeracityLabel, int]
    parse_warning: bool = False


def distribution_from_ratings(ratings: Sequence[VeracityLabel]) -> dict[VeracityLabel, int]:
    """Counts per label with all three labels present (zeros kept)."""
    counts = Counter(ratings)
    return {label: counts.get(label, 0) for label in VeracityLabel}


def format_candidates(candidates: Sequence[FactCheck]) -> str:
    """Numbered candidate block, one line per claim, English when available."""
    return "\n".join(
        f"{i}. {fc.display_claim()}" for i, fc in enumerate(candidates, start=1)
    )


def parse_selection(reply: str, n_candidates: int) -> tuple[list[tuple[int, str]], list[str]]:
    """Parse a filtration reply into (1-based index, explanation) pairs.

    Accepts the requested "<number>: <reason>" lines as well as bare
    number lists ("1, 3"). Out-of-range and duplicate indices are dropped
    with a warning. Returns pairs sorted by index.
    """
    warnings: list[str] = []
    text = reply.strip()
    if not text or re.fullmatch(r"(?i)\W*none\W*", text):
        return [], warnings
    picked: dict[int, str] = {}
    structured = False
    for line in text.splitlines():
        if not line.strip():
            continue
        match = _SELECTION_LINE_RE.match(line)
        if not match:
            continue
        structured = True
        index = int(match.group(1))
        explanation = match.group(2).strip()
        if not 1 <= index <= n_candidates:
            warnings.append(f"selection index {index} out of range 1..{n_candidates}, dropped")
            continue
        if index in picked:
            warnings.append(f"duplicate selection index {index}, kept first")
            continue
        picked[index] = explanation
    if not structured:
        for raw in _INT_RE.findall(text):
            index = int(raw)
            if not 1 <= index <= n_candidates:
                warnings.append(f"selection index {index} out of range 1..{n_candidates}, dropped")
            elif index not in picked:
                picked[index] = ""
    if not picked and not warnings:
        warnings.append(f"unparseable selection reply: {text[:120]!r}")
    return sorted(picked.items()), warnings


def filter_candidates(chat: ChatClient, post: Post, candidates: Sequence[FactCheck],
                      templates: TemplateSet) -> FilterResult:
    """Ask the model which candidates are relevant to the post."""
    if not 1 <= len(candidates) <= MAX_FILTER_CANDIDATES:
        raise ValueError(f"candidate count must be 1..{MAX_FILTER_CANDIDATES}")
    prompt = templates.render("filtration", post=post.text,
                              candidates=format_candidates(candidates))
    reply = chat.chat(prompt)
    pairs, warnings = parse_selection(reply, len(candidates))
    relevant = [(candidates[index - 1].id, explanation) for index, explanation in pairs]
    return FilterResult(
        relevant=relevant,
        considered=[fc.id for fc in candidates],
        warnings=warnings,
    )


def summarize(chat: ChatClient, article_text: str, order: str,
              templates: TemplateSet) -> str:
    """Summarize a fact-checking article in English.

    ``order`` selects whether the article precedes or follows the
    instruction, which materially affects small models.
    """
    if order not in ("article_first", "article_last"):
        raise ValueError(f"unknown order: {order!r}")
    if not article_text or not article_text.strip():
        raise ValueError("article_text must be non-empty")
    prompt = templates.render(f"summarize_{order}", article=article_text)
    return chat.chat(prompt).strip()


def parse_verdict_reply(reply: str) -> tuple[VeracityLabel, str, bool]:
    """Extract (label, explanation, parse_warning) from a veracity reply.

    The mandated format is a "Label: <True|False|Unverifiable>" header
    line. Replies without it are scanned for the first class name as a
    fallback; if nothing matches, the label degrades to Unverifiable.
    """
    lines = reply.splitlines()
    for i, line in enumerate(lines):
        header = _LABEL_LINE_RE.match(line)
        if not header:
            continue
        word = _LABEL_WORD_RE.search(header.group(1))
        if word:
            label = VeracityLabel.from_canonical(word.group(1))
            explanation = "\n".join(lines[i + 1:]).strip()
            return label, explanation, False
    word = _LABEL_WORD_RE.search(reply)
    if word:
        return VeracityLabel.from_canonical(word.group(1)), reply.strip(), True
    return VeracityLabel.UNVERIFIABLE, reply.strip(), True


def format_context(relevant: Sequence[tuple[FactCheck, str, VeracityLabel]]) -> str:
    """English context block: claim, rating and summary per fact-check."""
    if not relevant:
        return "(no relevant fact-checks were found)"
    blocks = []
    for i, (fc, summary, rating) in enumerate(relevant, start=1):
        lines = [f"{i}. Claim: {fc.display_claim()}", f"   Rating: {rating.value}"]
        if summary:
            lines.append(f"   Summary: {summary}")
        blocks.append("\n".join(lines))
    return "\n".join(blocks)


def predict_veracity(chat: ChatClient, post: Post,
                     relevant: Sequence[tuple[FactCheck, str, VeracityLabel]],
                     templates: TemplateSet) -> VeracityVerdict:
    """Predict the post label from retrieved fact-checks and summaries.

    The label distribution is computed from the ratings of the relevant
    fact-checks, never from the model reply.
    """
    prompt = templates.render("veracity_with_context", post=post.text,
                              context=format_context(relevant))
    reply = chat.chat(prompt)
    label, explanation, warning = parse_verdict_reply(reply)
    return VeracityVerdict(
        label=label,
        explanation=explanation,
        distribution=distribution_from_ratings([rating for _, _, rating in relevant]),
        parse_warning=warning,
    )


def predict_veracity_baseline(chat: ChatClient, post: Post,
                              templates: TemplateSet) -> VeracityVerdict:
    """Predict the post label from the post alone (no retrieval context)."""
    prompt = templates.render("veracity_baseline", post=post.text)
    reply = chat.chat(prompt)
    label, explanation, warning = parse_verdict_reply(reply)
    return VeracityVerdict(
        label=label,
        explanation=explanation,
        distribution={},
        parse_warning=warning,
    )
