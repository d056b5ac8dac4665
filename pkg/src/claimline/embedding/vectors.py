"""Embedding vectors and cosine similarity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORMALIZED_TOL = 1e-4


class DimensionMismatchError(ValueError):
    pass


class ZeroVectorError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    """Fixed-length float32 vector, optionally flagged as L2-normalized."""

    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float32)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("embedding must be a non-empty 1-D vector")
        if not np.all(np.isfinite(values)):
            raise ValueError("embedding contains non-finite values")
        if self.normalized:
            norm = float(np.linalg.norm(values))
            if abs(norm - 1.0) > NORMALIZED_TOL:
                raise ValueError(f"vector flagged normalized but |v|={norm:.6f}")

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    def unit(self) -> "EmbeddingVector":
        """Return the L2-normalized version of this vector."""
        if self.normalized:
            return self
        norm = float(np.linalg.norm(self.values))
        if norm == 0.0:
            raise ZeroVectorError("cannot normalize a zero vector")
        return EmbeddingVector(self.values / np.float32(norm), normalized=True)


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine similarity dot(a,b)/(|a||b|), clamped to [-1, 1].

    Computed in float64 for stability; for normalized inputs this equals
    the plain dot product to within 1e-6.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dim mismatch: {a.dim} vs {b.dim}")
    av = a.values.astype(np.float64)
    bv = b.values.astype(np.float64)
    na = float(np.linalg.norm(av))
    nb = float(np.linalg.norm(bv))
    if na == 0.0 or nb == 0.0:
        raise ZeroVectorError("cosine undefined for zero vectors")
    score = float(np.dot(av, bv) / (na * nb))
    return max(-1.0, min(1.0, score))
