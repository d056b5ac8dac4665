"""Corpus ingestion and durable storage.

Two ingestion formats are supported, JSONL (one record per line) and CSV
with identical header names. Malformed records never abort a load: they
are collected into a LoadReport alongside the successfully parsed
records, so that every input record is accounted for exactly once.

The durable corpus format is JSONL with a one-line header record
carrying the format version, followed by fact-check records and then
post records. Round trip is field-for-field exact.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Any, Iterable

from .ratings import normalize_rating
from .types import Corpus, FactCheck, Post, VeracityLabel

FORMAT_NAME = "claimline-corpus"
FORMAT_VERSION = 1

FACTCHECK_FIELDS = (
    "id",
    "claim_text",
    "claim_english",
    "language",
    "published_date",
    "organization",
    "rating_raw",
    "article_url",
    "article_text",
    "reference_summary",
    "reference_summary_english",
)
POST_FIELDS = ("id", "text", "language", "veracity", "linked_factcheck_ids")


class CorpusFormatError(ValueError):
    """The on-disk corpus file is unreadable or has the wrong version."""


@dataclass
class LoadError:
    """One rejected input record, pinned to its line (or CSV row) number."""

    line: int
    message: str
    record_id: str | None = None


@dataclass
class LoadReport:
    loaded: int = 0
    errors: list[LoadError] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def ok(self) -> bool:
        return not self.errors


def _records_from_file(path: Path, fmt: str) -> Iterable[tuple[int, dict | str]]:
    """Yield (line_number, record-or-error-message) pairs."""
    if fmt == "jsonl":
        with path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    yield lineno, f"invalid json: {exc.msg}"
                    continue
                if not isinstance(record, dict):
                    yield lineno, "record is not an object"
                    continue
                yield lineno, record
    elif fmt == "csv":
        with path.open(encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            for lineno, row in enumerate(reader, start=2):  # header is line 1
                yield lineno, {k: v for k, v in row.items() if k is not None and v not in (None, "")}
    else:
        raise ValueError(f"unsupported format: {fmt!r} (expected 'jsonl' or 'csv')")


def _parse_date(value: Any, lineno: int, report: LoadReport) -> date | None:
    if value in (None, ""):
        return None
    try:
        return date.fromisoformat(str(value))
    except ValueError:
        report.warnings.append(f"line {lineno}: unparseable published_date {value!r}, dropped")
        return None


def _parse_factcheck(record: dict, lineno: int, report: LoadReport, table) -> FactCheck | None:
    missing = [f for f in ("id", "claim_text", "language") if not record.get(f)]
    if missing:
        report.errors.append(LoadError(lineno, f"missing required field(s): {', '.join(missing)}",
                                       record.get("id")))
        return None
    raw = record.get("rating_raw", "")
    rating, warning = normalize_rating(raw, table)
    if warning:
        report.warnings.append(f"line {lineno}: {warning}")
    fc = FactCheck(
        id=str(record["id"]),
        claim_text=str(record["claim_text"]),
        language=str(record["language"]),
        rating=rating,
        rating_raw=str(raw or ""),
        claim_english=record.get("claim_english"),
        published_date=_parse_date(record.get("published_date"), lineno, report),
        organization=record.get("organization"),
        article_url=record.get("article_url"),
        article_text=record.get("article_text"),
        reference_summary=record.get("reference_summary"),
        reference_summary_english=record.get("reference_summary_english"),
    )
    problems = fc.problems()
    if problems:
        report.errors.append(LoadError(lineno, "; ".join(problems), fc.id))
        return None
    return fc


def _parse_post(record: dict, lineno: int, report: LoadReport, table) -> Post | None:
    missing = [f for f in ("id", "text", "language") if not record.get(f)]
    if missing:
        report.errors.append(LoadError(lineno, f"missing required field(s): {', '.join(missing)}",
                                       record.get("id")))
        return None
    veracity = None
    if record.get("veracity") not in (None, ""):
        veracity, warning = normalize_rating(str(record["veracity"]), table)
        if warning:
            report.warnings.append(f"line {lineno}: {warning}")
    linked = record.get("linked_factcheck_ids") or []
    if isinstance(linked, str):
        linked = [part.strip() for part in linked.split(";") if part.strip()]
    post = Post(
        id=str(record["id"]),
        text=str(record["text"]),
        language=str(record["language"]),
        veracity=veracity,
        linked_factcheck_ids=frozenset(str(i) for i in linked),
    )
    problems = post.problems()
    if problems:
        report.errors.append(LoadError(lineno, "; ".join(problems), post.id))
        return None
    return post


def _load(path, fmt, parse, table) -> tuple[dict, LoadReport]:
    path = Path(path)
    report = LoadReport()
    out: dict[str, Any] = {}
    for lineno, record in _records_from_file(path, fmt):
        if isinstance(record, str):
            report.errors.append(LoadError(lineno, record))
            continue
        parsed = parse(record, lineno, report, table)
        if parsed is None:
            continue
        if parsed.id in out:
            report.errors.append(LoadError(lineno, f"duplicate id {parsed.id!r}", parsed.id))
            continue
        out[parsed.id] = parsed
        report.loaded += 1
    return out, report


def load_factchecks(path, fmt: str = "jsonl", rating_table=None) -> tuple[dict[str, FactCheck], LoadReport]:
    """Load fact-checks from a JSONL or CSV file.

    Required fields per record: id, claim_text, language. Raw ratings are
    normalized on the way in; rejected records land in the report with
    their line numbers.
    """
    return _load(path, fmt, _parse_factcheck, rating_table)


def load_posts(path, fmt: str = "jsonl", rating_table=None) -> tuple[dict[str, Post], LoadReport]:
    """Load posts from a JSONL or CSV file; veracity strings are normalized."""
    return _load(path, fmt, _parse_post, rating_table)


def _factcheck_record(fc: FactCheck) -> dict:
    return {
        "id": fc.id,
        "claim_text": fc.claim_text,
        "claim_english": fc.claim_english,
        "language": fc.language,
        "published_date": fc.published_date.isoformat() if fc.published_date else None,
        "organization": fc.organization,
        "rating_raw": fc.rating_raw,
        "rating": fc.rating.value,
        "article_url": fc.article_url,
        "article_text": fc.article_text,
        "reference_summary": fc.reference_summary,
        "reference_summary_english": fc.reference_summary_english,
    }


def _post_record(post: Post) -> dict:
    return {
        "id": post.id,
        "text": post.text,
        "language": post.language,
        "veracity": post.veracity.value if post.veracity else None,
        "linked_factcheck_ids": sorted(post.linked_factcheck_ids),
    }


def save_corpus(corpus: Corpus, path) -> None:
    """Write a corpus to its durable JSONL format (header, fact-checks, posts)."""
    path = Path(path)
    header = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "fact_checks": len(corpus.fact_checks),
        "posts": len(corpus.posts),
    }
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, ensure_ascii=False) + "\n")
        for fc_id in sorted(corpus.fact_checks):
            fh.write(json.dumps(_factcheck_record(corpus.fact_checks[fc_id]), ensure_ascii=False) + "\n")
        for post_id in sorted(corpus.posts):
            fh.write(json.dumps(_post_record(corpus.posts[post_id]), ensure_ascii=False) + "\n")


def open_corpus(path) -> Corpus:
    """Read back a corpus written by save_corpus. Round trip is exact."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        first = fh.readline()
        try:
            header = json.loads(first)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"{path}: missing corpus header ({exc.msg})") from exc
        if not isinstance(header, dict) or header.get("format") != FORMAT_NAME:
            raise CorpusFormatError(f"{path}: not a {FORMAT_NAME} file")
        if header.get("version") != FORMAT_VERSION:
            raise CorpusFormatError(
                f"{path}: unsupported corpus version {header.get('version')!r}, "
                f"expected {FORMAT_VERSION}"
            )
        n_fc = int(header.get("fact_checks", 0))
        n_posts = int(header.get("posts", 0))
        fact_checks: dict[str, FactCheck] = {}
        posts: dict[str, Post] = {}
        for i, line in enumerate(fh):
            record = json.loads(line)
            if i < n_fc:
                fc = FactCheck(
                    id=record["id"],
                    claim_text=record["claim_text"],
                    language=record["language"],
                    rating=VeracityLabel(record["rating"]),
                    rating_raw=record.get("rating_raw") or "",
                    claim_english=record.get("claim_english"),
                    published_date=(
                        date.fromisoformat(record["published_date"])
                        if record.get("published_date")
                        else None
                    ),
                    organization=record.get("organization"),
                    article_url=record.get("article_url"),
                    article_text=record.get("article_text"),
                    reference_summary=record.get("reference_summary"),
                    reference_summary_english=record.get("reference_summary_english"),
                )
                fact_checks[fc.id] = fc
            elif i < n_fc + n_posts:
                post = Post(
                    id=record["id"],
                    text=record["text"],
                    language=record["language"],
                    veracity=(
                        VeracityLabel(record["veracity"]) if record.get("veracity") else None
                    ),
                    linked_factcheck_ids=frozenset(record.get("linked_factcheck_ids") or []),
                )
                posts[post.id] = post
            else:
                raise CorpusFormatError(f"{path}: more records than declared in header")
    if len(fact_checks) != n_fc or len(posts) != n_posts:
        raise CorpusFormatError(f"{path}: truncated corpus file")
    return Corpus(fact_checks=fact_checks, posts=posts)
