"""Wire schemas for the HTTP API.

FactCheckPublic mirrors the corpus JSONL field names exactly (plus the
normalized rating) so that clients can treat API records and corpus
records interchangeably.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..corpus.types import FactCheck
from ..pipeline import PipelineOutput


class VerifyRequest(BaseModel):
    text: str
    top_k: int | None = Field(default=None, ge=1)
    language_hint: str | None = None


class FactCheckPublic(BaseModel):
    id: str
    claim_text: str
    claim_english: str | None = None
    language: str
    published_date: str | None = None
    organization: str | None = None
    rating_raw: str = ""
    rating: str
    article_url: str | None = None
    article_text: str | None = None
    reference_summary: str | None = None
    reference_summary_english: str | None = None

    @classmethod
    def from_factcheck(cls, fc: FactCheck) -> "FactCheckPublic":
        return cls(
            id=fc.id,
            claim_text=fc.claim_text,
            claim_english=fc.claim_english,
            language=fc.language,
            published_date=fc.published_date.isoformat() if fc.published_date else None,
            organization=fc.organization,
            rating_raw=fc.rating_raw,
            rating=fc.rating.value,
            article_url=fc.article_url,
            article_text=fc.article_text,
            reference_summary=fc.reference_summary,
            reference_summary_english=fc.reference_summary_english,
        )


class RelevantEntry(BaseModel):
    factcheck: FactCheckPublic
    summary: str
    relevance_explanation: str


class IrrelevantEntry(BaseModel):
    factcheck: FactCheckPublic
    score: float


class VerdictModel(BaseModel):
    label: str
    explanation: str
    distribution: dict[str, int]
    parse_warning: bool = False


class VerifyResponse(BaseModel):
    relevant: list[RelevantEntry]
    irrelevant: list[IrrelevantEntry]
    verdict: VerdictModel
    overall_summary: str
    timing: dict[str, float]
    degraded: bool = False
    warnings: list[str] = Field(default_factory=list)

    @classmethod
    def from_pipeline(cls, output: PipelineOutput) -> "VerifyResponse":
        return cls(
            relevant=[
                RelevantEntry(
                    factcheck=FactCheckPublic.from_factcheck(item.factcheck),
                    summary=item.summary,
                    relevance_explanation=item.relevance_explanation,
                )
                for item in output.relevant
            ],
            irrelevant=[
                IrrelevantEntry(
                    factcheck=FactCheckPublic.from_factcheck(item.factcheck),
                    score=item.score,
                )
                for item in output.irrelevant
            ],
            verdict=VerdictModel(
                label=output.verdict.label.value,
                explanation=output.verdict.explanation,
                distribution={k.value: v for k, v in output.verdict.distribution.items()},
                parse_warning=output.verdict.parse_warning,
            ),
            overall_summary=output.overall_summary,
            timing=output.timing_ms,
            degraded=output.degraded,
            warnings=output.warnings,
        )


class IngestRequest(BaseModel):
    path: str | None = None
    content: str | None = None  # raw JSONL body as an alternative to a path


class IngestError(BaseModel):
    line: int
    message: str
    record_id: str | None = None


class IngestSummary(BaseModel):
    loaded: int
    errors: list[IngestError]
    warnings: list[str]
    index_size: int


class HealthResponse(BaseModel):
    status: str
    index_size: int
    providers: dict[str, str]


class ErrorBody(BaseModel):
    code: str
    message: str


class ErrorEnvelope(BaseModel):
    error: ErrorBody
