"""Builders for criteria-retrieval evaluation settings.

A setting is one family of filters (languages, organizations, date
ranges, named entities); each instance pairs an English criterion
sentence with the manual predicate it is supposed to emulate.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from datetime import date
from typing import Callable

from ..corpus.types import Corpus, FactCheck
from ..retrieval.criteria import language_name


@dataclass(frozen=True)
class CriteriaInstance:
    name: str
    criteria_text: str
    predicate: Callable[[FactCheck], bool]


@dataclass(frozen=True)
class CriteriaSetting:
    name: str
    instances: tuple[CriteriaInstance, ...]


def language_setting(corpus: Corpus) -> CriteriaSetting:
    counts = Counter(fc.language for fc in corpus.fact_checks.values())
    instances = []
    for code in sorted(counts):
        instances.append(CriteriaInstance(
            name=f"language={code}",
            criteria_text=f"Fact-checks written in {language_name(code)}",
            predicate=lambda fc, code=code: fc.language == code,
        ))
    return CriteriaSetting(name="languages", instances=tuple(instances))


def domain_setting(corpus: Corpus) -> CriteriaSetting:
    counts = Counter(
        fc.organization for fc in corpus.fact_checks.values() if fc.organization
    )
    instances = []
    for org in sorted(counts):
        instances.append(CriteriaInstance(
            name=f"domain={org}",
            criteria_text=f"Fact-checks published by {org}",
            predicate=lambda fc, org=org: fc.organization == org,
        ))
    return CriteriaSetting(name="domains", instances=tuple(instances))


def date_range_setting(ranges: list[tuple[str, str]]) -> CriteriaSetting:
    instances = []
    for start_str, end_str in ranges:
        start, end = date.fromisoformat(start_str), date.fromisoformat(end_str)
        instances.append(CriteriaInstance(
            name=f"dates={start_str}..{end_str}",
            criteria_text=f"Fact-checks published between {start_str} and {end_str}",
            predicate=lambda fc, start=start, end=end: (
                fc.published_date is not None and start <= fc.published_date <= end
            ),
        ))
    return CriteriaSetting(name="dates", instances=tuple(instances))


def named_entity_setting(entities: list[str]) -> CriteriaSetting:
    instances = []
    for entity in entities:
        needle = entity.lower()
        instances.append(CriteriaInstance(
            name=f"entity={entity}",
            criteria_text=f"Fact-checks about {entity}",
            predicate=lambda fc, needle=needle: (
                needle in fc.claim_text.lower()
                or (fc.claim_english or "").lower().find(needle) >= 0
            ),
        ))
    return CriteriaSetting(name="named_entities", instances=tuple(instances))


def matching_count(corpus: Corpus, instance: CriteriaInstance) -> int:
    return sum(1 for fc in corpus.fact_checks.values() if instance.predicate(fc))
