"""Domain types for fact-check corpora.

A corpus holds two collections: fact-checks (the retrieval units) and
social-media posts (the queries, optionally carrying ground truth).
Both are immutable after construction; ingestion always builds a new
corpus value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date
from enum import Enum

LANGUAGE_CODE_RE = re.compile(r"^[a-z]{2,3}(-[a-z0-9]{2,8})*$")


class VeracityLabel(str, Enum):
    """Three-way veracity rating of a claim or post."""

    TRUE = "True"
    FALSE = "False"
    UNVERIFIABLE = "Unverifiable"

    @classmethod
    def from_canonical(cls, value: str) -> "VeracityLabel":
        """Parse one of the three canonical label strings (case-insensitive)."""
        for label in cls:
            if label.value.lower() == value.strip().lower():
                return label
        raise ValueError(f"not a veracity label: {value!r}")


@dataclass(frozen=True)
class FactCheck:
    """One previously fact-checked claim with its article metadata.

    ``rating`` is the normalized three-way label derived from the
    publisher's ``rating_raw`` string.
    """

    id: str
    claim_text: str
    language: str
    rating: VeracityLabel = VeracityLabel.UNVERIFIABLE
    rating_raw: str = ""
    claim_english: str | None = None
    published_date: date | None = None
    organization: str | None = None
    article_url: str | None = None
    article_text: str | None = None
    reference_summary: str | None = None
    reference_summary_english: str | None = None

    def problems(self) -> list[str]:
        """Return invariant violations, empty when the record is valid."""
        out = []
        if not self.id:
            out.append("id is empty")
        if not self.claim_text or not self.claim_text.strip():
            out.append("claim_text is empty")
        if not LANGUAGE_CODE_RE.match(self.language or ""):
            out.append(f"invalid language code: {self.language!r}")
        if not isinstance(self.rating, VeracityLabel):
            out.append(f"invalid rating: {self.rating!r}")
        return out

    def display_claim(self) -> str:
        """Claim shown to humans and LLMs: English translation when available."""
        return self.claim_english or self.claim_text


@dataclass(frozen=True)
class Post:
    """A social-media post, optionally linked to its verifying fact-checks."""

    id: str
    text: str
    language: str
    veracity: VeracityLabel | None = None
    linked_factcheck_ids: frozenset[str] = frozenset()

    def problems(self) -> list[str]:
        out = []
        if not self.id:
            out.append("id is empty")
        if not self.text or not self.text.strip():
            out.append("text is empty")
        if not LANGUAGE_CODE_RE.match(self.language or ""):
            out.append(f"invalid language code: {self.language!r}")
        return out


class ReferentialIntegrityError(ValueError):
    """A post links to a fact-check id that is not in the corpus."""


@dataclass(frozen=True)
class Corpus:
    """Immutable snapshot of fact-checks and posts with intact links."""

    fact_checks: dict[str, FactCheck] = field(default_factory=dict)
    posts: dict[str, Post] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        fact_checks: dict[str, FactCheck],
        posts: dict[str, Post],
        strict: bool = False,
    ) -> tuple["Corpus", list[str]]:
        """Assemble a corpus, enforcing post -> fact-check referential integrity.

        In lenient mode (default) dangling links are pruned and reported as
        warnings; in strict mode the first dangling link raises
        ReferentialIntegrityError.
        """
        warnings: list[str] = []
        clean_posts: dict[str, Post] = {}
        for pid, post in posts.items():
            dangling = sorted(i for i in post.linked_factcheck_ids if i not in fact_checks)
            if dangling:
                if strict:
                    raise ReferentialIntegrityError(
                        f"post {pid!r} links unknown fact-check ids: {dangling}"
                    )
                warnings.append(f"post {pid!r}: pruned unknown fact-check ids {dangling}")
                post = Post(
                    id=post.id,
                    text=post.text,
                    language=post.language,
                    veracity=post.veracity,
                    linked_factcheck_ids=post.linked_factcheck_ids - set(dangling),
                )
            clean_posts[pid] = post
        return cls(fact_checks=dict(fact_checks), posts=clean_posts), warnings

    def judgments(self) -> dict[str, set[str]]:
        """Relevance judgments: post id -> linked fact-check ids (non-empty only)."""
        return {
            p.id: set(p.linked_factcheck_ids)
            for p in self.posts.values()
            if p.linked_factcheck_ids
        }

    def languages(self) -> list[str]:
        """Sorted union of post and fact-check languages."""
        langs = {fc.language for fc in self.fact_checks.values()}
        langs.update(p.language for p in self.posts.values())
        return sorted(langs)
