"""Embedding cache keyed by (model_name, dim, text hash).

On disk: an append-only file of fixed-layout records
(32-byte key hash, u32 little-endian dim, dim little-endian float32).
A truncated or corrupt tail is tolerated: loading stops at the damage,
warns, and the affected entries are simply recomputed.

Concurrency: reads are lock-free once loaded, writes are serialized, and
duplicate in-flight requests for one key are coalesced so the provider is
asked exactly once.
"""

from __future__ import annotations

import hashlib
import logging
import struct
import threading
from pathlib import Path

import numpy as np

from .provider import Embedder, EmbedderSpec, embed_batch as _embed_batch
from .vectors import EmbeddingVector

logger = logging.getLogger(__name__)

_HEADER = struct.Struct("<32sI")


def cache_key(model_name: str, text: str) -> bytes:
    return hashlib.sha256(f"{model_name}\x00{text}".encode("utf-8")).digest()


class EmbeddingCache:
    """In-memory embedding cache with optional append-only disk backing."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._store: dict[tuple[bytes, int], np.ndarray] = {}
        self._lock = threading.Lock()
        self._inflight: dict[tuple[bytes, int], threading.Event] = {}
        if self.path is not None and self.path.exists():
            self._load()

    def __len__(self) -> int:
        return len(self._store)

    def _load(self) -> None:
        data = self.path.read_bytes()
        offset = 0
        while offset < len(data):
            if offset + _HEADER.size > len(data):
                logger.warning("embedding cache %s: truncated record header, tail ignored", self.path)
                break
            key, dim = _HEADER.unpack_from(data, offset)
            offset += _HEADER.size
            end = offset + 4 * dim
            if dim == 0 or end > len(data):
                logger.warning("embedding cache %s: truncated record body, tail ignored", self.path)
                break
            values = np.frombuffer(data[offset:end], dtype="<f4").copy()
            offset = end
            if not np.all(np.isfinite(values)):
                logger.warning("embedding cache %s: non-finite record skipped", self.path)
                continue
            self._store[(key, dim)] = values

    def _append(self, key: bytes, values: np.ndarray) -> None:
        if self.path is None:
            return
        record = _HEADER.pack(key, values.shape[0]) + values.astype("<f4").tobytes()
        with self.path.open("ab") as fh:
            fh.write(record)

    def get(self, model_name: str, dim: int, text: str) -> EmbeddingVector | None:
        values = self._store.get((cache_key(model_name, text), dim))
        if values is None:
            return None
        return EmbeddingVector(values, normalized=True)

    def put(self, model_name: str, dim: int, text: str, vector: EmbeddingVector) -> None:
        key = (cache_key(model_name, text), dim)
        with self._lock:
            if key not in self._store:
                self._store[key] = vector.values
                self._append(key[0], vector.values)

    def get_or_embed(self, embedder: Embedder | EmbedderSpec, texts: list[str]) -> list[EmbeddingVector]:
        """Return vectors for texts, consulting the provider only on misses."""
        spec = embedder.spec if isinstance(embedder, Embedder) else embedder
        results: list[EmbeddingVector | None] = [None] * len(texts)
        misses: list[str] = []  # unique texts to embed, in first-seen order
        miss_keys: list[tuple[bytes, int]] = []
        wait_for: list[tuple[bytes, int]] = []

        with self._lock:
            seen: set[tuple[bytes, int]] = set()
            for i, text in enumerate(texts):
                key = (cache_key(spec.model_name, text), spec.dim)
                values = self._store.get(key)
                if values is not None:
                    results[i] = EmbeddingVector(values, normalized=True)
                elif key in seen:
                    pass  # duplicate within this call, resolved after embedding
                elif key in self._inflight:
                    wait_for.append(key)
                    seen.add(key)
                else:
                    self._inflight[key] = threading.Event()
                    misses.append(text)
                    miss_keys.append(key)
                    seen.add(key)

        if misses:
            try:
                vectors = _embed_batch(embedder, misses)
            except Exception:
                with self._lock:
                    for key in miss_keys:
                        self._inflight.pop(key).set()
                raise
            with self._lock:
                for key, vector in zip(miss_keys, vectors):
                    if key not in self._store:
                        self._store[key] = vector.values
                        self._append(key[0], vector.values)
                    self._inflight.pop(key).set()

        for key in wait_for:
            event = self._inflight.get(key)
            if event is not None:
                event.wait()

        for i, text in enumerate(texts):
            if results[i] is None:
                key = (cache_key(spec.model_name, text), spec.dim)
                values = self._store.get(key)
                if values is None:
                    # inflight producer failed; recompute directly
                    vector = _embed_batch(embedder, [text])[0]
                    self.put(spec.model_name, spec.dim, text, vector)
                    values = vector.values
                results[i] = EmbeddingVector(values, normalized=True)
        return results


def cache_get_or_embed(cache: EmbeddingCache, embedder: Embedder | EmbedderSpec,
                       texts: list[str]) -> list[EmbeddingVector]:
    return cache.get_or_embed(embedder, texts)


class CachingEmbedder:
    """Embedder wrapper that routes every batch through a cache.

    Drop-in for Embedder anywhere the engine embeds text, so repeated
    queries and re-ingestions skip the provider.
    """

    def __init__(self, embedder: Embedder, cache: EmbeddingCache):
        self._embedder = embedder
        self.cache = cache

    @property
    def spec(self) -> EmbedderSpec:
        return self._embedder.spec

    @property
    def calls(self) -> int:
        return self._embedder.calls

    def embed_batch(self, texts: list[str]) -> list[EmbeddingVector]:
        return self.cache.get_or_embed(self._embedder, texts)
