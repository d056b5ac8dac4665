"""Text-embedding providers: remote HTTP services and a deterministic stub.

The remote provider speaks the OpenAI-compatible embeddings protocol:
POST {"model": ..., "input": [texts]} -> {"data": [{"embedding": [...]}]}.
The stub is a pure function of (model_name, text, dim), hash-seeded so the
same text maps to the same vector in any process, which makes fixtures and
caches reproducible without a model server.
"""

from __future__ import annotations

import hashlib
import threading
import time
from dataclasses import dataclass

import httpx
import numpy as np

from .vectors import EmbeddingVector

MAX_ATTEMPTS = 3


class EmbeddingError(RuntimeError):
    pass


class EmbeddingTransportError(EmbeddingError):
    """Network or server failure after exhausting retries."""


class EmbeddingRateLimitError(EmbeddingTransportError):
    """Provider signalled rate limiting (HTTP 429)."""


class EmbeddingDimensionError(EmbeddingError):
    """Provider returned vectors whose length disagrees with the spec."""


@dataclass(frozen=True)
class EmbedderSpec:
    """Configuration of one embedding provider."""

    kind: str  # "remote" | "stub"
    model_name: str
    dim: int
    endpoint: str | None = None
    batch_size: int = 32
    timeout: float = 30.0

    def __post_init__(self):
        if self.kind not in ("remote", "stub"):
            raise ValueError(f"unknown embedder kind: {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote embedder requires an endpoint")
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")


def stub_vector(text: str, dim: int, model_name: str = "") -> np.ndarray:
    """Deterministic unit vector for a text: hash-seeded standard normals."""
    digest = hashlib.sha256(f"{model_name}\x00{text}".encode("utf-8")).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    v = rng.standard_normal(dim).astype(np.float32)
    v /= np.float32(np.linalg.norm(v))
    return v


class Embedder:
    """Batch embedding client for one EmbedderSpec.

    ``calls`` counts provider round trips (one per batch), which tests and
    the cache use to observe hit behaviour. ``max_concurrency`` bounds
    in-flight provider calls across threads; None leaves them unbounded.
    """

    def __init__(self, spec: EmbedderSpec, client: httpx.Client | None = None,
                 retry_base_delay: float = 0.25,
                 max_concurrency: int | None = None):
        self.spec = spec
        self.calls = 0
        self._calls_lock = threading.Lock()
        self._retry_base_delay = retry_base_delay
        self._limiter = (threading.Semaphore(max_concurrency)
                         if max_concurrency else None)
        self._client = client
        if spec.kind == "remote" and client is None:
            self._client = httpx.Client(timeout=spec.timeout)

    def embed_batch(self, texts: list[str]) -> list[EmbeddingVector]:
        """Embed texts in order, one normalized vector per text."""
        if not texts:
            raise ValueError("texts must be non-empty")
        for i, t in enumerate(texts):
            if not t or not t.strip():
                raise ValueError(f"text at position {i} is empty")
        out: list[EmbeddingVector] = []
        for start in range(0, len(texts), self.spec.batch_size):
            batch = texts[start:start + self.spec.batch_size]
            if self._limiter is not None:
                with self._limiter:
                    out.extend(self._call(batch))
            else:
                out.extend(self._call(batch))
        return out

    def _call(self, batch: list[str]) -> list[EmbeddingVector]:
        with self._calls_lock:
            self.calls += 1
        if self.spec.kind == "stub":
            rows = [stub_vector(t, self.spec.dim, self.spec.model_name) for t in batch]
        else:
            rows = self._call_remote(batch)
        vectors = []
        for row in rows:
            if len(row) != self.spec.dim:
                raise EmbeddingDimensionError(
                    f"provider returned dim {len(row)}, spec says {self.spec.dim}"
                )
            vectors.append(EmbeddingVector(np.asarray(row, dtype=np.float32)).unit())
        return vectors

    def _call_remote(self, batch: list[str]) -> list[list[float]]:
        payload = {"model": self.spec.model_name, "input": batch}
        last_exc: Exception | None = None
        rate_limited = False
        for attempt in range(MAX_ATTEMPTS):
            try:
                resp = self._client.post(self.spec.endpoint, json=payload)
            except httpx.HTTPError as exc:
                last_exc = exc
                time.sleep(self._retry_base_delay * (2 ** attempt))
                continue
            if resp.status_code == 429:
                rate_limited = True
                last_exc = EmbeddingRateLimitError("provider rate limit (HTTP 429)")
                time.sleep(self._retry_base_delay * (2 ** attempt))
                continue
            if resp.status_code >= 500:
                last_exc = EmbeddingTransportError(f"server error HTTP {resp.status_code}")
                time.sleep(self._retry_base_delay * (2 ** attempt))
                continue
            if resp.status_code >= 400:
                raise EmbeddingTransportError(
                    f"provider rejected request: HTTP {resp.status_code} {resp.text[:200]}"
                )
            data = resp.json()
            items = data.get("data")
            if not isinstance(items, list) or len(items) != len(batch):
                raise EmbeddingTransportError(
                    f"provider returned {len(items) if isinstance(items, list) else 'no'} "
                    f"embeddings for {len(batch)} inputs"
                )
            return [item["embedding"] for item in items]
        if rate_limited:
            raise EmbeddingRateLimitError(
                f"rate limited after {MAX_ATTEMPTS} attempts"
            ) from last_exc
        raise EmbeddingTransportError(
            f"transport failed after {MAX_ATTEMPTS} attempts: {last_exc}"
        ) from last_exc


def embed_batch(spec: EmbedderSpec | Embedder, texts: list[str]) -> list[EmbeddingVector]:
    """One-shot convenience wrapper around Embedder.embed_batch."""
    embedder = spec if isinstance(spec, Embedder) else Embedder(spec)
    return embedder.embed_batch(texts)
