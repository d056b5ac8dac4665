from .classification import ConfusionCounts, macro_prf, tnr_fnr, youden_threshold
from .correlation import (
    common_fc_proportion,
    fractional_ranks,
    kendall_tau,
    kendall_tau_from_ranks,
    pearson,
    spearman,
)
from .retrieval import Judgments, first_relevant_rank, mrr, success_at_k
from .rouge import lcs_length, rouge_l

# Canonical key names used wherever metric maps are serialized.
CANONICAL_KEYS = (
    "s_at_10",
    "mrr",
    "macro_f1",
    "macro_precision",
    "macro_recall",
    "tnr",
    "fnr",
    "spearman",
    "kendall_tau",
    "common_fc",
    "rouge_l_f1",
)

__all__ = [
    "CANONICAL_KEYS",
    "ConfusionCounts",
    "Judgments",
    "common_fc_proportion",
    "first_relevant_rank",
    "fractional_ranks",
    "kendall_tau",
    "kendall_tau_from_ranks",
    "lcs_length",
    "macro_prf",
    "mrr",
    "pearson",
    "rouge_l",
    "spearman",
    "success_at_k",
    "tnr_fnr",
    "youden_threshold",
]
