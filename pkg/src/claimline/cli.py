"""Command-line front door: ingestion, one-shot verification, experiments, serving.

Exit codes: 0 success, 1 error, 2 degraded pipeline result (retrieval
worked but generative providers were unavailable). Logs go to stderr,
data to stdout.
"""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click

from . import __version__
from .config import AppConfig, load_config, make_chat, make_embedder, make_templates
from .corpus.io import load_factchecks, load_posts, open_corpus, save_corpus
from .corpus.types import Corpus
from .harness.config import ExperimentConfig
from .harness.criteria_settings import (
    date_range_setting,
    domain_setting,
    language_setting,
    named_entity_setting,
)
from .harness.runners import (
    claim_index,
    run_criteria_retrieval,
    run_direct_retrieval,
    run_filtration,
    run_summarization,
    run_veracity,
)
from .pipeline import run_pipeline
from .service.schemas import VerifyResponse

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DEGRADED = 2


def _log(message: str) -> None:
    click.echo(message, err=True)


def config_option(fn):
    return click.option("--config", "config_path", type=click.Path(),
                        default=None, help="Path to a claimline JSON config file.")(fn)


def _load_app(config_path) -> AppConfig:
    # exit code 1 on a missing config (UsageError would exit 2, which is
    # reserved for degraded pipeline results)
    if config_path and not Path(config_path).exists():
        raise click.ClickException(f"config file not found: {config_path}")
    return load_config(config_path)


def _experiment_config(app: AppConfig, name: str, out: str | None) -> ExperimentConfig:
    harness = app.harness
    return ExperimentConfig(
        name=name,
        corpus_path=app.corpus_path or "",
        embedder=app.embedder,
        chat=app.chat,
        k_retrieve=int(harness.get("k_retrieve", 50)),
        k_report=int(harness.get("k_report", 10)),
        languages=tuple(harness.get("languages", ())),
        seed=int(harness.get("seed", 0)),
        output_dir=out,
        include_bm25=bool(harness.get("include_bm25", True)),
        parallelism=int(harness.get("parallelism", 1)),
    )


def _require_corpus(app: AppConfig) -> Corpus:
    if not app.corpus_path:
        raise click.ClickException("config has no corpus_path")
    return open_corpus(app.corpus_path)


def _finish_report(report, out_dir: str) -> None:
    path = report.save(out_dir)
    for warning in report.warnings:
        _log(f"warning: {warning}")
    click.echo(report.to_table(), nl=False)
    _log(f"report written to {path}")


@click.group()
@click.version_option(version=__version__, prog_name="claimline")
def main() -> None:
    """Previously fact-checked claim retrieval and verification."""


@main.command()
@config_option
@click.option("--factchecks", type=click.Path(exists=True), required=True,
              help="Fact-check records (JSONL or CSV).")
@click.option("--posts", type=click.Path(exists=True), default=None,
              help="Optional post records (JSONL or CSV).")
@click.option("--format", "fmt", type=click.Choice(["jsonl", "csv"]), default="jsonl")
@click.option("--out", type=click.Path(), required=True,
              help="Destination corpus file.")
@click.option("--strict/--lenient", default=False,
              help="Fail on dangling post links instead of pruning them.")
def ingest(config_path, factchecks, posts, fmt, out, strict) -> None:
    """Build a corpus file from raw fact-check and post records."""
    fact_checks, fc_report = load_factchecks(factchecks, fmt)
    post_map, post_report = ({}, None)
    if posts:
        post_map, post_report = load_posts(posts, fmt)
    corpus, warnings = Corpus.build(fact_checks, post_map, strict=strict)
    save_corpus(corpus, out)
    for report in (fc_report, post_report):
        if report is None:
            continue
        for error in report.errors:
            _log(f"error: line {error.line}: {error.message}")
        for warning in report.warnings:
            _log(f"warning: {warning}")
    for warning in warnings:
        _log(f"warning: {warning}")
    n_errors = len(fc_report.errors) + (len(post_report.errors) if post_report else 0)
    click.echo(json.dumps({
        "fact_checks": len(corpus.fact_checks),
        "posts": len(corpus.posts),
        "errors": n_errors,
        "corpus": str(out),
    }))
    if not fact_checks and n_errors:
        sys.exit(EXIT_ERROR)


@main.command()
@config_option
@click.option("--text", required=True, help="Claim or post text to verify.")
@click.option("--top-k", type=int, default=None, help="Candidates to retrieve.")
@click.option("--json", "as_json", is_flag=True, help="Emit the VerifyResponse JSON.")
@click.pass_context
def verify(ctx, config_path, text, top_k, as_json) -> None:
    """Run the full pipeline once for a single text."""
    if not text.strip():
        _log(ctx.get_usage())
        _log("error: --text must be non-empty")
        sys.exit(EXIT_ERROR)
    app = _load_app(config_path)
    corpus = _require_corpus(app)
    embedder = make_embedder(app)
    chat = make_chat(app)
    templates = make_templates(app)
    index = claim_index(corpus, embedder)
    output = run_pipeline(
        text, corpus=corpus, index=index, embedder=embedder, chat=chat,
        templates=templates, top_k_n=top_k or app.top_k,
        degraded_enabled=app.degraded_enabled)
    response = VerifyResponse.from_pipeline(output)
    if as_json:
        click.echo(response.model_dump_json(indent=2))
    else:
        click.echo(f"Verdict: {response.verdict.label}")
        if response.verdict.explanation:
            click.echo(f"Explanation: {response.verdict.explanation}")
        if response.overall_summary:
            click.echo(f"Summary: {response.overall_summary}")
        click.echo(f"\nRelevant fact-checks ({len(response.relevant)}):")
        for entry in response.relevant:
            click.echo(f"  - [{entry.factcheck.rating}] {entry.factcheck.claim_text}")
            if entry.summary:
                click.echo(f"    summary: {entry.summary}")
            if entry.relevance_explanation:
                click.echo(f"    why: {entry.relevance_explanation}")
        click.echo(f"Other retrieved ({len(response.irrelevant)}):")
        for entry in response.irrelevant[:10]:
            click.echo(f"  - ({entry.score:.3f}) {entry.factcheck.claim_text}")
    if response.degraded:
        _log("pipeline degraded: generative providers unavailable")
        sys.exit(EXIT_DEGRADED)


@main.command("eval-retrieval")
@config_option
@click.option("--out", type=click.Path(), required=True)
def eval_retrieval(config_path, out) -> None:
    """Monolingual direct-retrieval evaluation (S@K, MRR, BM25 baseline)."""
    app = _load_app(config_path)
    cfg = _experiment_config(app, "direct_retrieval", out)
    report = run_direct_retrieval(cfg, corpus=_require_corpus(app),
                                  embedder=make_embedder(app))
    _finish_report(report, out)


@main.command("eval-criteria")
@config_option
@click.option("--out", type=click.Path(), required=True)
def eval_criteria(config_path, out) -> None:
    """Criteria-based retrieval vs manual-filter reference."""
    app = _load_app(config_path)
    cfg = _experiment_config(app, "criteria_retrieval", out)
    corpus = _require_corpus(app)
    criteria = app.criteria
    settings = []
    if criteria.get("languages", True):
        settings.append(language_setting(corpus))
    if criteria.get("domains", True):
        settings.append(domain_setting(corpus))
    if criteria.get("date_ranges"):
        settings.append(date_range_setting(
            [tuple(r) for r in criteria["date_ranges"]]))
    if criteria.get("named_entities"):
        settings.append(named_entity_setting(list(criteria["named_entities"])))
    report = run_criteria_retrieval(
        cfg, settings, corpus=corpus, embedder=make_embedder(app),
        min_group=int(criteria.get("min_group", 100)),
        relaxed=bool(criteria.get("relaxed", False)),
        prefilter_threshold=float(criteria.get("prefilter_threshold", 0.8)))
    _finish_report(report, out)


@main.command("eval-filtration")
@config_option
@click.option("--out", type=click.Path(), required=True)
def eval_filtration(config_path, out) -> None:
    """LLM filtration of retrieved candidates (S@10, MRR, Macro F1, TNR, FNR)."""
    app = _load_app(config_path)
    cfg = _experiment_config(app, "filtration", out)
    report = run_filtration(cfg, corpus=_require_corpus(app),
                            embedder=make_embedder(app), chat=make_chat(app),
                            templates=make_templates(app))
    _finish_report(report, out)


@main.command("eval-summarization")
@config_option
@click.option("--out", type=click.Path(), required=True)
@click.option("--order", "orders", multiple=True,
              type=click.Choice(["article_first", "article_last"]),
              help="Restrict to one prompt order (default: both).")
def eval_summarization(config_path, out, orders) -> None:
    """Summarization quality (ROUGE-L) in both prompt orders."""
    app = _load_app(config_path)
    cfg = _experiment_config(app, "summarization", out)
    report = run_summarization(
        cfg, corpus=_require_corpus(app), chat=make_chat(app),
        templates=make_templates(app),
        orders=tuple(orders) or ("article_first", "article_last"))
    _finish_report(report, out)


@main.command("eval-veracity")
@config_option
@click.option("--out", type=click.Path(), required=True)
@click.option("--mode", type=click.Choice(["with_context", "baseline"]),
              default="with_context")
def eval_veracity(config_path, out, mode) -> None:
    """Veracity prediction vs gold labels (Macro F1/P/R)."""
    app = _load_app(config_path)
    cfg = _experiment_config(app, f"veracity_{mode}", out)
    report = run_veracity(cfg, mode=mode, corpus=_require_corpus(app),
                          embedder=make_embedder(app), chat=make_chat(app),
                          templates=make_templates(app))
    _finish_report(report, out)


@main.command()
@config_option
@click.option("--bind", default="127.0.0.1:8080", help="addr:port to listen on.")
def serve(config_path, bind) -> None:
    """Run the HTTP service until interrupted; drains in-flight requests."""
    import uvicorn

    from .service.app import create_app

    host, _, port_str = bind.rpartition(":")
    if not host or not port_str.isdigit():
        raise click.UsageError(f"--bind must look like addr:port, got {bind!r}")
    port = int(port_str)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((host, port))
    except OSError as exc:
        raise click.ClickException(f"cannot bind {bind}: {exc}") from exc
    finally:
        probe.close()
    app = _load_app(config_path)
    try:
        asgi = create_app(app)
    except Exception as exc:
        raise click.ClickException(f"failed to start service: {exc}") from exc
    try:
        uvicorn.run(asgi, host=host, port=port, log_level="warning")
    except OSError as exc:
        raise click.ClickException(f"cannot bind {bind}: {exc}") from exc
    except SystemExit as exc:
        if exc.code:
            raise click.ClickException(f"server failed to start on {bind}") from exc


if __name__ == "__main__":
    main()
