from .config import ExperimentConfig, ExperimentReport, provenance_for
from .criteria_settings import (
    CriteriaInstance,
    CriteriaSetting,
    date_range_setting,
    domain_setting,
    language_setting,
    matching_count,
    named_entity_setting,
)
from .runners import (
    claim_index,
    metadata_index,
    missing_fc_rate,
    run_criteria_retrieval,
    run_direct_retrieval,
    run_filtration,
    run_summarization,
    run_veracity,
)

__all__ = [
    "CriteriaInstance",
    "CriteriaSetting",
    "ExperimentConfig",
    "ExperimentReport",
    "claim_index",
    "date_range_setting",
    "domain_setting",
    "language_setting",
    "matching_count",
    "metadata_index",
    "missing_fc_rate",
    "named_entity_setting",
    "provenance_for",
    "run_criteria_retrieval",
    "run_direct_retrieval",
    "run_filtration",
    "run_summarization",
    "run_veracity",
]
