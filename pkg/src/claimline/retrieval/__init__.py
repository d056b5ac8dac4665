from .bm25 import Bm25Index, bm25_rank, tokenize
from .criteria import (
    CriteriaQuery,
    criteria_retrieve,
    language_name,
    reference_filtered_rank,
    render_criteria_template,
)
from .index import IndexFormatError, VectorIndex, build_index, top_k
from .ranked import RankedList

__all__ = [
    "Bm25Index",
    "CriteriaQuery",
    "IndexFormatError",
    "RankedList",
    "VectorIndex",
    "bm25_rank",
    "build_index",
    "criteria_retrieve",
    "language_name",
    "reference_filtered_rank",
    "render_criteria_template",
    "tokenize",
    "top_k",
]
