"""Dense vector index with exact top-k cosine search.

The engine is deliberately brute force: a contiguous float32 matrix of
normalized vectors scored with one matrix-vector product, then sorted by
(score desc, id asc). At the corpus scales this serves (1e5-1e6 entries)
that is both tractable and, unlike ANN structures, exact, which the
evaluation harness depends on.

Persistence layout (little endian): magic, u32 version, u32 dim,
u32 name length + model name bytes, u64 count, then per record
8-byte id hash, u32 id length, id bytes, dim float32.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from ..embedding.vectors import DimensionMismatchError, EmbeddingVector, ZeroVectorError
from .ranked import RankedList

MAGIC = b"CLAIMIDX"
VERSION = 1


class IndexFormatError(ValueError):
    pass


def _id_hash(fc_id: str) -> bytes:
    return hashlib.sha256(fc_id.encode("utf-8")).digest()[:8]


@dataclass(frozen=True, eq=False)
class VectorIndex:
    """Immutable snapshot mapping ids to normalized vectors."""

    ids: tuple[str, ...]
    matrix: np.ndarray  # (n, dim) float32, rows L2-normalized
    model_name: str

    def __post_init__(self):
        if self.matrix.ndim != 2:
            raise ValueError("index matrix must be 2-D")
        if len(self.ids) != self.matrix.shape[0]:
            raise ValueError("ids and matrix row count disagree")

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, fc_id: str) -> bool:
        return fc_id in self._row_of

    @property
    def _row_of(self) -> dict[str, int]:
        cache = self.__dict__.get("_row_cache")
        if cache is None:
            cache = {fc_id: row for row, fc_id in enumerate(self.ids)}
            self.__dict__["_row_cache"] = cache
        return cache

    def vector(self, fc_id: str) -> EmbeddingVector:
        return EmbeddingVector(self.matrix[self._row_of[fc_id]], normalized=True)

    @classmethod
    def from_entries(
        cls,
        entries: Mapping[str, EmbeddingVector] | Iterable[tuple[str, EmbeddingVector]],
        model_name: str,
    ) -> "VectorIndex":
        """Build an index; vectors are normalized defensively."""
        pairs = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
        if not pairs:
            return cls(ids=(), matrix=np.zeros((0, 1), dtype=np.float32), model_name=model_name)
        dim = pairs[0][1].dim
        matrix = np.empty((len(pairs), dim), dtype=np.float32)
        ids = []
        for row, (fc_id, vec) in enumerate(pairs):
            if vec.dim != dim:
                raise DimensionMismatchError(
                    f"entry {fc_id!r} has dim {vec.dim}, index dim {dim}"
                )
            matrix[row] = vec.unit().values
            ids.append(fc_id)
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate ids in index entries")
        return cls(ids=tuple(ids), matrix=matrix, model_name=model_name)

    def scores(self, query: EmbeddingVector) -> np.ndarray:
        """Cosine of the query against every entry, as one float32 vector."""
        if len(self) == 0:
            return np.zeros(0, dtype=np.float32)
        if query.dim != self.dim:
            raise DimensionMismatchError(f"query dim {query.dim}, index dim {self.dim}")
        return self.matrix @ query.unit().values

    def rank_subset(self, query: EmbeddingVector, subset: Iterable[str],
                    k: int | None = None, query_id: str = "") -> RankedList:
        """Exact (score desc, id asc) ranking restricted to the given ids."""
        rows = self._row_of
        scores = self.scores(query)
        pairs = [(fc_id, float(scores[rows[fc_id]])) for fc_id in subset]
        return RankedList.from_scores(query_id, pairs, k=k)

    def save(self, path: str | Path) -> None:
        path = Path(path)
        name = self.model_name.encode("utf-8")
        with path.open("wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<III", VERSION, self.dim, len(name)))
            fh.write(name)
            fh.write(struct.pack("<Q", len(self.ids)))
            for row, fc_id in enumerate(self.ids):
                raw = fc_id.encode("utf-8")
                fh.write(_id_hash(fc_id))
                fh.write(struct.pack("<I", len(raw)))
                fh.write(raw)
                fh.write(self.matrix[row].astype("<f4").tobytes())

    @classmethod
    def load(cls, path: str | Path) -> "VectorIndex":
        path = Path(path)
        with path.open("rb") as fh:
            magic = fh.read(len(MAGIC))
            if magic != MAGIC:
                raise IndexFormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
            version, dim, name_len = struct.unpack("<III", fh.read(12))
            if version != VERSION:
                raise IndexFormatError(
                    f"{path}: unsupported index version {version}, expected {VERSION}"
                )
            model_name = fh.read(name_len).decode("utf-8")
            (count,) = struct.unpack("<Q", fh.read(8))
            ids = []
            matrix = np.empty((count, dim), dtype=np.float32)
            for row in range(count):
                stored_hash = fh.read(8)
                (id_len,) = struct.unpack("<I", fh.read(4))
                fc_id = fh.read(id_len).decode("utf-8")
                if _id_hash(fc_id) != stored_hash:
                    raise IndexFormatError(f"{path}: id hash mismatch at record {row}")
                matrix[row] = np.frombuffer(fh.read(4 * dim), dtype="<f4")
                ids.append(fc_id)
        return cls(ids=tuple(ids), matrix=matrix, model_name=model_name)


def build_index(ids: Iterable[str], vectors: Iterable[EmbeddingVector],
                model_name: str) -> VectorIndex:
    return VectorIndex.from_entries(zip(ids, vectors), model_name)


def top_k(index: VectorIndex, query: EmbeddingVector, k: int,
          query_id: str = "") -> RankedList:
    """Exact k highest-cosine entries (all entries when k exceeds the index).

    Ties break by ascending id, so the result is a deterministic total
    order and the top-k list is always a prefix of the top-(k+1) list.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(index) == 0:
        return RankedList(query_id=query_id, items=[])
    scores = index.scores(query)
    order = np.lexsort((np.asarray(index.ids), -scores))[:k]
    items = [(index.ids[row], float(scores[row])) for row in order]
    return RankedList(query_id=query_id, items=items)
