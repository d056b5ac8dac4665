from .cache import CachingEmbedder, EmbeddingCache, cache_get_or_embed, cache_key
from .provider import (
    Embedder,
    EmbedderSpec,
    EmbeddingDimensionError,
    EmbeddingError,
    EmbeddingRateLimitError,
    EmbeddingTransportError,
    embed_batch,
    stub_vector,
)
from .vectors import (
    DimensionMismatchError,
    EmbeddingVector,
    ZeroVectorError,
    cosine,
)

__all__ = [
    "CachingEmbedder",
    "DimensionMismatchError",
    "Embedder",
    "EmbedderSpec",
    "EmbeddingCache",
    "EmbeddingDimensionError",
    "EmbeddingError",
    "EmbeddingRateLimitError",
    "EmbeddingTransportError",
    "EmbeddingVector",
    "ZeroVectorError",
    "cache_get_or_embed",
    "cache_key",
    "cosine",
    "embed_batch",
    "stub_vector",
]
