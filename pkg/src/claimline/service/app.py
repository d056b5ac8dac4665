"""HTTP service exposing the verification pipeline.

Endpoints: POST /api/verify, GET /api/factcheck/{id}, POST /api/ingest,
GET /healthz. All bodies are UTF-8 JSON and errors use the envelope
{"error": {"code", "message"}}.

The corpus and its vector index live in an immutable snapshot swapped
atomically by ingest, so concurrent verifies always see a complete index
and an ingest in progress keeps serving the previous snapshot.
"""

from __future__ import annotations

import tempfile
import threading
import time
from dataclasses import dataclass
from pathlib import Path

import httpx
import numpy as np
from fastapi import FastAPI, Header, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..config import AppConfig, load_app_corpus, make_chat, make_embedder, make_templates
from ..corpus.io import load_factchecks
from ..corpus.types import Corpus
from ..llm.provider import ChatClient, ChatError
from ..pipeline import run_pipeline
from ..retrieval.index import VectorIndex, build_index
from .schemas import (
    ErrorBody,
    ErrorEnvelope,
    FactCheckPublic,
    HealthResponse,
    IngestError,
    IngestRequest,
    IngestSummary,
    VerifyRequest,
    VerifyResponse,
)


class ApiError(Exception):
    def __init__(self, status_code: int, code: str, message: str):
        super().__init__(message)
        self.status_code = status_code
        self.code = code
        self.message = message


@dataclass(frozen=True)
class Snapshot:
    corpus: Corpus
    index: VectorIndex


class Engine:
    """Pipeline state: providers plus the current corpus/index snapshot."""

    def __init__(self, config: AppConfig, embedder=None, chat: ChatClient | None = None,
                 templates=None):
        self.config = config
        self.embedder = embedder if embedder is not None else make_embedder(config)
        self.chat = chat if chat is not None else make_chat(config)
        self.templates = templates if templates is not None else make_templates(config)
        self.snapshot: Snapshot | None = None
        self._ingest_lock = threading.Lock()

    def build_snapshot(self, corpus: Corpus) -> Snapshot:
        ids = sorted(corpus.fact_checks)
        if not ids:
            index = VectorIndex(ids=(), matrix=np.zeros((0, self.embedder.spec.dim),
                                                        dtype=np.float32),
                                model_name=self.embedder.spec.model_name)
        else:
            texts = [corpus.fact_checks[i].claim_text for i in ids]
            index = build_index(ids, self.embedder.embed_batch(texts),
                                self.embedder.spec.model_name)
        return Snapshot(corpus=corpus, index=index)

    def install_corpus(self, corpus: Corpus) -> None:
        self.snapshot = self.build_snapshot(corpus)

    def verify(self, text: str, top_k_n: int):
        snapshot = self.snapshot
        if snapshot is None:
            raise ApiError(503, "index_not_loaded", "no corpus has been ingested yet")
        if self.config.verify_delay_ms:
            time.sleep(self.config.verify_delay_ms / 1000.0)
        try:
            return run_pipeline(
                text,
                corpus=snapshot.corpus,
                index=snapshot.index,
                embedder=self.embedder,
                chat=self.chat,
                templates=self.templates,
                top_k_n=top_k_n,
                degraded_enabled=self.config.degraded_enabled,
            )
        except ChatError as exc:
            raise ApiError(502, "provider_error", str(exc)) from exc

    def ingest(self, fact_checks, report) -> IngestSummary:
        """Build a fresh snapshot and swap it in; serialized across callers."""
        with self._ingest_lock:
            previous = self.snapshot
            posts = previous.corpus.posts if previous else {}
            corpus, integrity_warnings = Corpus.build(fact_checks, posts)
            snapshot = self.build_snapshot(corpus)
            self.snapshot = snapshot
        return IngestSummary(
            loaded=report.loaded,
            errors=[IngestError(line=e.line, message=e.message, record_id=e.record_id)
                    for e in report.errors],
            warnings=report.warnings + integrity_warnings,
            index_size=len(snapshot.index),
        )

    def provider_health(self) -> dict[str, str]:
        out = {}
        out["embedder"] = self._probe(self.embedder.spec.kind,
                                      getattr(self.embedder.spec, "endpoint", None))
        if self.chat is None:
            out["chat"] = "not_configured"
        else:
            out["chat"] = self._probe(self.chat.spec.kind, self.chat.spec.endpoint)
        return out

    @staticmethod
    def _probe(kind: str, endpoint: str | None) -> str:
        if kind == "stub":
            return "ok"
        if not endpoint:
            return "not_configured"
        try:
            httpx.get(endpoint, timeout=2.0)
            return "ok"
        except httpx.HTTPError:
            return "unreachable"


def create_app(config: AppConfig | None = None, *, corpus: Corpus | None = None,
               embedder=None, chat: ChatClient | None = None, templates=None) -> FastAPI:
    """Build the FastAPI app; keyword arguments override config-driven setup."""
    config = config or AppConfig()
    engine = Engine(config, embedder=embedder, chat=chat, templates=templates)
    if corpus is None:
        corpus = load_app_corpus(config)
    if corpus is not None:
        engine.install_corpus(corpus)

    app = FastAPI(title="claimline", version="0.1.0")
    app.state.engine = engine
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError):
        envelope = ErrorEnvelope(error=ErrorBody(code=exc.code, message=exc.message))
        return JSONResponse(status_code=exc.status_code, content=envelope.model_dump())

    @app.post("/api/verify", response_model=VerifyResponse)
    def verify(request: VerifyRequest) -> VerifyResponse:
        text = request.text.strip()
        if not text:
            raise ApiError(400, "empty_query", "text must be non-empty")
        if len(request.text) > config.max_text_len:
            raise ApiError(400, "text_too_long",
                           f"text exceeds {config.max_text_len} characters")
        top_k_n = request.top_k or config.top_k
        output = engine.verify(text, top_k_n)
        return VerifyResponse.from_pipeline(output)

    @app.get("/api/factcheck/{fc_id}", response_model=FactCheckPublic)
    def get_factcheck(fc_id: str) -> FactCheckPublic:
        snapshot = engine.snapshot
        if snapshot is None:
            raise ApiError(503, "index_not_loaded", "no corpus has been ingested yet")
        fc = snapshot.corpus.fact_checks.get(fc_id)
        if fc is None:
            raise ApiError(404, "not_found", f"unknown fact-check id: {fc_id}")
        return FactCheckPublic.from_factcheck(fc)

    @app.post("/api/ingest", response_model=IngestSummary)
    def ingest(request: IngestRequest,
               x_admin_token: str | None = Header(default=None)) -> IngestSummary:
        if not config.admin_token:
            raise ApiError(403, "ingest_disabled", "no admin token configured")
        if x_admin_token != config.admin_token:
            raise ApiError(401, "missing_token", "valid X-Admin-Token header required")
        if bool(request.path) == bool(request.content):
            raise ApiError(400, "bad_request", "provide exactly one of path or content")
        if request.path:
            source = Path(request.path)
            if not source.exists():
                raise ApiError(422, "malformed_corpus", f"no such file: {request.path}")
            fact_checks, report = load_factchecks(source)
        else:
            with tempfile.NamedTemporaryFile("w", suffix=".jsonl", delete=False,
                                             encoding="utf-8") as fh:
                fh.write(request.content)
                temp_path = fh.name
            try:
                fact_checks, report = load_factchecks(temp_path)
            finally:
                Path(temp_path).unlink(missing_ok=True)
        if not fact_checks and report.errors:
            raise ApiError(422, "malformed_corpus",
                           f"no loadable records ({len(report.errors)} errors)")
        return engine.ingest(fact_checks, report)

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        snapshot = engine.snapshot
        return HealthResponse(
            status="ok" if snapshot is not None else "degraded",
            index_size=len(snapshot.index) if snapshot else 0,
            providers=engine.provider_health(),
        )

    return app
