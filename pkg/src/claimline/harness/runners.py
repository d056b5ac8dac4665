"""Experiment runners wiring corpus, retrieval, LLM stages and metrics.

Five evaluations: direct retrieval (monolingual ranking), criteria-based
retrieval (embedding pre-filter vs manual filter), filtration (LLM
candidate pruning), summarization (ROUGE-L against references) and
veracity prediction (macro P/R/F1 against gold labels). Each produces an
ExperimentReport with one row per language (or per setting) and an
unweighted average. Posts are iterated in sorted id order and folds are
deterministic, so a rerun with the same inputs reproduces the report
byte for byte.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np

from ..corpus.io import open_corpus
from ..corpus.types import Corpus, Post
from ..embedding.cache import CachingEmbedder, EmbeddingCache
from ..embedding.provider import Embedder
from ..llm.provider import ChatClient, ChatError
from ..llm.stages import filter_candidates, predict_veracity_baseline, summarize
from ..llm.templates import TemplateSet, load_templates
from ..metrics.classification import ConfusionCounts, macro_prf, tnr_fnr, youden_threshold
from ..metrics.correlation import common_fc_proportion, kendall_tau, spearman
from ..metrics.retrieval import first_relevant_rank, mrr, success_at_k
from ..metrics.rouge import rouge_l
from ..pipeline import run_pipeline
from ..retrieval.bm25 import Bm25Index
from ..retrieval.criteria import (
    CriteriaQuery,
    criteria_retrieve,
    reference_filtered_rank,
    render_criteria_template,
)
from ..retrieval.index import VectorIndex, build_index, top_k
from ..retrieval.ranked import RankedList
from .config import ExperimentConfig, ExperimentReport, provenance_for
from .criteria_settings import CriteriaSetting, matching_count

LOW_ROUGE_FLAG = 0.05  # below this F1 the reply is suspected non-English


def resolve_embedder(cfg: ExperimentConfig, embedder: Embedder | None = None,
                     cache: EmbeddingCache | None = None):
    emb = embedder if embedder is not None else Embedder(cfg.embedder)
    return CachingEmbedder(emb, cache) if cache is not None else emb


def resolve_chat(cfg: ExperimentConfig, chat: ChatClient | None = None) -> ChatClient:
    if chat is not None:
        return chat
    if cfg.chat is None:
        raise ValueError(f"experiment {cfg.name!r} requires a chat provider")
    return ChatClient(cfg.chat)


def load_experiment_corpus(cfg: ExperimentConfig, corpus: Corpus | None = None) -> Corpus:
    return corpus if corpus is not None else open_corpus(cfg.corpus_path)


def claim_index(corpus: Corpus, embedder, fc_ids: Sequence[str] | None = None) -> VectorIndex:
    ids = sorted(fc_ids) if fc_ids is not None else sorted(corpus.fact_checks)
    if not ids:
        return VectorIndex(ids=(), matrix=np.zeros((0, 1), dtype=np.float32),
                           model_name=embedder.spec.model_name)
    texts = [corpus.fact_checks[i].claim_text for i in ids]
    return build_index(ids, embedder.embed_batch(texts), embedder.spec.model_name)


def metadata_index(corpus: Corpus, embedder, fc_ids: Sequence[str] | None = None) -> VectorIndex:
    ids = sorted(fc_ids) if fc_ids is not None else sorted(corpus.fact_checks)
    texts = [render_criteria_template(corpus.fact_checks[i]) for i in ids]
    return build_index(ids, embedder.embed_batch(texts), embedder.spec.model_name)


def _languages(cfg: ExperimentConfig, posts: Iterable[Post]) -> list[str]:
    if cfg.languages:
        return sorted(cfg.languages)
    return sorted({p.language for p in posts})


def _map_posts(fn: Callable, posts: Sequence[Post], parallelism: int) -> dict[str, object]:
    """Apply fn to each post, optionally in parallel; results keyed by post id."""
    if parallelism <= 1:
        return {post.id: fn(post) for post in posts}
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        results = list(pool.map(fn, posts))
    return {post.id: result for post, result in zip(posts, results)}


def run_direct_retrieval(cfg: ExperimentConfig, corpus: Corpus | None = None,
                         embedder: Embedder | None = None,
                         cache: EmbeddingCache | None = None) -> ExperimentReport:
    """Monolingual ranking: each post scored against same-language fact-checks."""
    corpus = load_experiment_corpus(cfg, corpus)
    emb = resolve_embedder(cfg, embedder, cache)
    judged = [p for p in corpus.posts.values() if p.linked_factcheck_ids]
    warnings: list[str] = []
    per_language: dict[str, dict[str, float]] = {}
    rows: list[dict] = []

    for lang in _languages(cfg, judged):
        fc_ids = [i for i, fc in corpus.fact_checks.items() if fc.language == lang]
        judgments = {}
        posts = []
        for post in sorted((p for p in judged if p.language == lang), key=lambda p: p.id):
            relevant = {i for i in post.linked_factcheck_ids
                        if corpus.fact_checks.get(i) and corpus.fact_checks[i].language == lang}
            if relevant:
                posts.append(post)
                judgments[post.id] = relevant
        if not posts or not fc_ids:
            warnings.append(f"{lang}: no judged posts with same-language fact-checks, skipped")
            continue
        index = claim_index(corpus, emb, fc_ids)
        query_vecs = emb.embed_batch([p.text for p in posts])
        rankings = [
            top_k(index, vec, cfg.k_retrieve, query_id=post.id)
            for post, vec in zip(posts, query_vecs)
        ]
        metric_row = {
            "s_at_10": success_at_k(rankings, judgments, 10),
            f"s_at_{cfg.k_report}": success_at_k(rankings, judgments, cfg.k_report),
            "mrr": mrr(rankings, judgments),
            "queries": float(len(posts)),
        }
        bm25_rankings: list[RankedList] = []
        if cfg.include_bm25:
            bm25 = Bm25Index({i: corpus.fact_checks[i].claim_text for i in fc_ids})
            bm25_rankings = [bm25.rank(p.text, cfg.k_retrieve, query_id=p.id) for p in posts]
            metric_row["bm25_s_at_10"] = success_at_k(bm25_rankings, judgments, 10)
            metric_row["bm25_mrr"] = mrr(bm25_rankings, judgments)
        per_language[lang] = metric_row
        for i, (post, ranking) in enumerate(zip(posts, rankings)):
            row = {
                "language": lang,
                "post_id": post.id,
                "first_relevant_rank": first_relevant_rank(ranking, judgments[post.id]),
            }
            if bm25_rankings:
                row["bm25_first_relevant_rank"] = first_relevant_rank(
                    bm25_rankings[i], judgments[post.id])
            rows.append(row)

    return ExperimentReport.build(cfg.name, per_language, provenance_for(cfg),
                                  warnings, rows)


def run_criteria_retrieval(cfg: ExperimentConfig, settings: Sequence[CriteriaSetting],
                           corpus: Corpus | None = None,
                           embedder: Embedder | None = None,
                           cache: EmbeddingCache | None = None,
                           min_group: int = 100, relaxed: bool = False,
                           prefilter_threshold: float = 0.8) -> ExperimentReport:
    """Two-step criteria retrieval scored against the manual-filter reference."""
    corpus = load_experiment_corpus(cfg, corpus)
    emb = resolve_embedder(cfg, embedder, cache)
    posts = sorted(corpus.posts.values(), key=lambda p: p.id)
    if not posts:
        raise ValueError("criteria retrieval needs posts to use as queries")
    index_claim = claim_index(corpus, emb)
    index_meta = metadata_index(corpus, emb)
    warnings: list[str] = []
    per_setting: dict[str, dict[str, float]] = {}
    rows: list[dict] = []

    for setting in settings:
        floor = 1 if relaxed else min_group
        qualifying = [inst for inst in setting.instances
                      if matching_count(corpus, inst) >= floor]
        if not qualifying:
            warnings.append(f"setting {setting.name}: no category with >= {floor} "
                            "matching fact-checks, skipped")
            continue
        spearmans: list[float] = []
        kendalls: list[float] = []
        commons: list[float] = []
        undefined = 0
        for inst in qualifying:
            for post in posts:
                reference = reference_filtered_rank(
                    corpus, inst.predicate, post.text, emb, index_claim,
                    k=cfg.k_report, query_id=post.id)
                if len(reference) == 0:
                    continue
                query = CriteriaQuery(
                    criteria_text=inst.criteria_text, post_text=post.text,
                    prefilter_threshold=prefilter_threshold, k=cfg.k_report)
                predicted = criteria_retrieve(index_meta, index_claim, query, emb,
                                              query_id=post.id)
                common = common_fc_proportion(predicted, reference, depth=cfg.k_report)
                commons.append(common)
                rho = spearman(predicted.ids(), reference.ids())
                tau = kendall_tau(predicted.ids(), reference.ids())
                if rho is None or tau is None:
                    undefined += 1
                else:
                    spearmans.append(rho)
                    kendalls.append(tau)
                rows.append({
                    "setting": setting.name, "instance": inst.name, "post_id": post.id,
                    "spearman": rho, "kendall_tau": tau, "common_fc": common,
                })
        if not commons:
            warnings.append(f"setting {setting.name}: no scorable (instance, post) pairs")
            continue
        metric_row = {"common_fc": sum(commons) / len(commons),
                      "pairs": float(len(commons)),
                      "undefined_correlations": float(undefined)}
        if spearmans:
            metric_row["spearman"] = sum(spearmans) / len(spearmans)
            metric_row["kendall_tau"] = sum(kendalls) / len(kendalls)
        per_setting[setting.name] = metric_row

    return ExperimentReport.build(cfg.name, per_setting, provenance_for(cfg),
                                  warnings, rows)


def _retrieve_and_filter(cfg: ExperimentConfig, corpus: Corpus, emb,
                         chat: ChatClient, templates: TemplateSet,
                         posts: Sequence[Post]) -> dict[str, tuple]:
    """Per post: (raw ranking, kept ids or None when the provider failed)."""
    index = claim_index(corpus, emb)
    vectors = {p.id: vec for p, vec in zip(posts, emb.embed_batch([p.text for p in posts]))}

    def one(post: Post):
        ranking = top_k(index, vectors[post.id], cfg.k_retrieve, query_id=post.id)
        candidates = [corpus.fact_checks[i] for i in ranking.ids()]
        if not candidates:
            return ranking, []
        try:
            result = filter_candidates(chat, post, candidates, templates)
        except ChatError:
            return ranking, None
        return ranking, result.relevant_ids()

    return _map_posts(one, posts, cfg.parallelism)


def _kept_ranking(ranking: RankedList, kept_ids: Sequence[str]) -> RankedList:
    """Restriction of a ranking to the kept ids, embedder order preserved."""
    kept = set(kept_ids)
    return RankedList(query_id=ranking.query_id,
                      items=[(i, s) for i, s in ranking.items if i in kept])


def run_filtration(cfg: ExperimentConfig, corpus: Corpus | None = None,
                   embedder: Embedder | None = None,
                   chat: ChatClient | None = None,
                   cache: EmbeddingCache | None = None,
                   templates: TemplateSet | None = None) -> ExperimentReport:
    """LLM pruning of the retrieved top-k plus the embedder-threshold baseline."""
    corpus = load_experiment_corpus(cfg, corpus)
    emb = resolve_embedder(cfg, embedder, cache)
    chat = resolve_chat(cfg, chat)
    templates = templates or load_templates()
    judgments = corpus.judgments()
    judged = sorted((p for p in corpus.posts.values() if p.id in judgments),
                    key=lambda p: p.id)
    warnings: list[str] = []
    per_language: dict[str, dict[str, float]] = {}
    rows: list[dict] = []

    langs = _languages(cfg, judged)
    outcomes = _retrieve_and_filter(
        cfg, corpus, emb, chat, templates,
        [p for p in judged if p.language in langs])

    for lang in langs:
        posts = [p for p in judged if p.language == lang]
        if not posts:
            warnings.append(f"{lang}: no judged posts, skipped")
            continue
        raw_rankings, kept_rankings = [], []
        pair_scores: list[float] = []
        pair_labels: list[bool] = []
        pair_kept: list[bool] = []
        failed = 0
        missing = 0
        for post in posts:
            ranking, kept_ids = outcomes[post.id]
            if kept_ids is None:
                failed += 1
                rows.append({"language": lang, "post_id": post.id, "status": "failed"})
                continue
            relevant = judgments[post.id]
            raw_rankings.append(ranking)
            kept_rankings.append(_kept_ranking(ranking, kept_ids))
            kept_set = set(kept_ids)
            if not kept_set & relevant:
                missing += 1
            for fc_id, score in ranking.items:
                pair_scores.append(score)
                pair_labels.append(fc_id in relevant)
                pair_kept.append(fc_id in kept_set)
            rows.append({
                "language": lang, "post_id": post.id, "status": "ok",
                "retrieved": len(ranking), "kept": len(kept_ids),
                "first_relevant_rank_raw": first_relevant_rank(ranking, relevant),
                "first_relevant_rank_kept": first_relevant_rank(
                    kept_rankings[-1], relevant),
            })
        if not raw_rankings:
            warnings.append(f"{lang}: all posts failed, skipped")
            continue
        restricted = {p.id: judgments[p.id] for p in posts}
        metric_row: dict[str, float] = {
            "s_at_10": success_at_k(kept_rankings, restricted, 10),
            "mrr": mrr(kept_rankings, restricted),
            "baseline_s_at_10": success_at_k(raw_rankings, restricted, 10),
            "baseline_mrr": mrr(raw_rankings, restricted),
            "failed": float(failed),
            "missing_fc": missing / len(raw_rankings),
        }
        counts = ConfusionCounts(
            tp=sum(1 for lab, kept in zip(pair_labels, pair_kept) if lab and kept),
            fp=sum(1 for lab, kept in zip(pair_labels, pair_kept) if not lab and kept),
            tn=sum(1 for lab, kept in zip(pair_labels, pair_kept) if not lab and not kept),
            fn=sum(1 for lab, kept in zip(pair_labels, pair_kept) if lab and not kept),
        )
        tnr, fnr = tnr_fnr(counts)
        if tnr is not None:
            metric_row["tnr"] = tnr
        if fnr is not None:
            metric_row["fnr"] = fnr
        f1, precision, recall = macro_prf(pair_labels, pair_kept)
        metric_row["macro_f1"] = f1
        if any(pair_labels) and not all(pair_labels):
            threshold, j = youden_threshold(pair_scores, pair_labels)
            base_pred = [s >= threshold for s in pair_scores]
            base_counts = ConfusionCounts(
                tp=sum(1 for lab, p in zip(pair_labels, base_pred) if lab and p),
                fp=sum(1 for lab, p in zip(pair_labels, base_pred) if not lab and p),
                tn=sum(1 for lab, p in zip(pair_labels, base_pred) if not lab and not p),
                fn=sum(1 for lab, p in zip(pair_labels, base_pred) if lab and not p),
            )
            base_tnr, base_fnr = tnr_fnr(base_counts)
            base_f1, _, _ = macro_prf(pair_labels, base_pred)
            metric_row["baseline_macro_f1"] = base_f1
            metric_row["youden_threshold"] = threshold
            metric_row["youden_j"] = j
            if base_tnr is not None:
                metric_row["baseline_tnr"] = base_tnr
            if base_fnr is not None:
                metric_row["baseline_fnr"] = base_fnr
        else:
            warnings.append(f"{lang}: single-class pair labels, Youden baseline skipped")
        per_language[lang] = metric_row

    return ExperimentReport.build(cfg.name, per_language, provenance_for(cfg),
                                  warnings, rows)


def run_summarization(cfg: ExperimentConfig, corpus: Corpus | None = None,
                      chat: ChatClient | None = None,
                      templates: TemplateSet | None = None,
                      orders: Sequence[str] = ("article_first", "article_last"),
                      ) -> ExperimentReport:
    """ROUGE-L of generated English summaries against reference summaries."""
    corpus = load_experiment_corpus(cfg, corpus)
    chat = resolve_chat(cfg, chat)
    templates = templates or load_templates()
    warnings: list[str] = []
    per_language: dict[str, dict[str, float]] = {}
    rows: list[dict] = []

    with_articles = [fc for fc in corpus.fact_checks.values()
                     if fc.article_text and fc.article_text.strip()]
    langs = sorted(cfg.languages) if cfg.languages else sorted(
        {fc.language for fc in with_articles})

    for lang in langs:
        group = sorted((fc for fc in with_articles if fc.language == lang),
                       key=lambda fc: fc.id)
        usable = [fc for fc in group if fc.reference_summary_english]
        skipped = len(group) - len(usable)
        if not usable:
            warnings.append(f"{lang}: no fact-checks with article and reference, skipped")
            continue
        metric_row: dict[str, float] = {"skipped": float(skipped)}
        failed = 0
        for order in orders:
            f1s, precisions, recalls = [], [], []
            flagged = 0
            for fc in usable:
                try:
                    summary = summarize(chat, fc.article_text, order, templates)
                except ChatError:
                    failed += 1
                    rows.append({"language": lang, "factcheck_id": fc.id,
                                 "order": order, "status": "failed"})
                    continue
                precision, recall, f1 = rouge_l(summary, fc.reference_summary_english)
                if f1 < LOW_ROUGE_FLAG:
                    flagged += 1
                f1s.append(f1)
                precisions.append(precision)
                recalls.append(recall)
                rows.append({"language": lang, "factcheck_id": fc.id, "order": order,
                             "status": "ok", "rouge_l_f1": f1})
            if f1s:
                metric_row[f"{order}_rouge_l_f1"] = sum(f1s) / len(f1s)
                metric_row[f"{order}_rouge_l_precision"] = sum(precisions) / len(precisions)
                metric_row[f"{order}_rouge_l_recall"] = sum(recalls) / len(recalls)
                metric_row[f"{order}_suspect_language"] = float(flagged)
        # canonical key mirrors the article-first setup (the headline one)
        if "article_first_rouge_l_f1" in metric_row:
            metric_row["rouge_l_f1"] = metric_row["article_first_rouge_l_f1"]
        metric_row["failed"] = float(failed)
        per_language[lang] = metric_row

    return ExperimentReport.build(cfg.name, per_language, provenance_for(cfg),
                                  warnings, rows)


def run_veracity(cfg: ExperimentConfig, mode: str = "with_context",
                 corpus: Corpus | None = None, embedder: Embedder | None = None,
                 chat: ChatClient | None = None,
                 cache: EmbeddingCache | None = None,
                 templates: TemplateSet | None = None) -> ExperimentReport:
    """Veracity prediction against gold labels, with or without retrieval context."""
    if mode not in ("with_context", "baseline"):
        raise ValueError(f"unknown mode: {mode!r}")
    corpus = load_experiment_corpus(cfg, corpus)
    chat = resolve_chat(cfg, chat)
    templates = templates or load_templates()
    emb = resolve_embedder(cfg, embedder, cache) if mode == "with_context" else None
    judgments = corpus.judgments()
    gold_posts = sorted((p for p in corpus.posts.values() if p.veracity is not None),
                        key=lambda p: p.id)
    warnings: list[str] = []
    per_language: dict[str, dict[str, float]] = {}
    rows: list[dict] = []

    langs = _languages(cfg, gold_posts)
    eligible = [p for p in gold_posts if p.language in langs]
    index = claim_index(corpus, emb) if mode == "with_context" else None

    def one(post: Post):
        try:
            if mode == "baseline":
                verdict = predict_veracity_baseline(chat, post, templates)
                return verdict, None
            output = run_pipeline(
                post.text, corpus=corpus, index=index, embedder=emb, chat=chat,
                templates=templates, top_k_n=cfg.k_retrieve, degraded_enabled=False,
                with_overall_summary=False, query_id=post.id)
            kept = {item.factcheck.id for item in output.relevant}
            return output.verdict, kept
        except ChatError:
            return None, None

    outcomes = _map_posts(one, eligible, cfg.parallelism)

    for lang in langs:
        posts = [p for p in eligible if p.language == lang]
        if not posts:
            warnings.append(f"{lang}: no posts with gold veracity, skipped")
            continue
        gold, pred = [], []
        failed = 0
        missing = 0
        judged_count = 0
        for post in posts:
            verdict, kept = outcomes[post.id]
            if verdict is None:
                failed += 1
                rows.append({"language": lang, "post_id": post.id, "status": "failed"})
                continue
            gold.append(post.veracity)
            pred.append(verdict.label)
            if mode == "with_context" and post.id in judgments:
                judged_count += 1
                if not (kept & judgments[post.id]):
                    missing += 1
            rows.append({"language": lang, "post_id": post.id, "status": "ok",
                         "gold": post.veracity.value, "predicted": verdict.label.value})
        if not gold:
            warnings.append(f"{lang}: all posts failed, skipped")
            continue
        f1, precision, recall = macro_prf(gold, pred)
        metric_row = {
            "macro_f1": f1, "macro_precision": precision, "macro_recall": recall,
            "failed": float(failed), "posts": float(len(gold)),
        }
        if mode == "with_context" and judged_count:
            metric_row["missing_fc"] = missing / judged_count
        per_language[lang] = metric_row

    return ExperimentReport.build(cfg.name, per_language, provenance_for(cfg),
                                  warnings, rows)


def missing_fc_rate(cfg: ExperimentConfig, corpus: Corpus | None = None,
                    embedder: Embedder | None = None,
                    chat: ChatClient | None = None,
                    cache: EmbeddingCache | None = None,
                    templates: TemplateSet | None = None) -> float:
    """Fraction of judged posts whose post-filter set misses every judged id."""
    corpus = load_experiment_corpus(cfg, corpus)
    emb = resolve_embedder(cfg, embedder, cache)
    chat = resolve_chat(cfg, chat)
    templates = templates or load_templates()
    judgments = corpus.judgments()
    judged = sorted((p for p in corpus.posts.values() if p.id in judgments),
                    key=lambda p: p.id)
    if cfg.languages:
        judged = [p for p in judged if p.language in set(cfg.languages)]
    if not judged:
        raise ValueError("no judged posts available")
    outcomes = _retrieve_and_filter(cfg, corpus, emb, chat, templates, judged)
    missing = 0
    scored = 0
    for post in judged:
        _, kept_ids = outcomes[post.id]
        if kept_ids is None:
            continue
        scored += 1
        if not set(kept_ids) & judgments[post.id]:
            missing += 1
    if scored == 0:
        raise ValueError("all posts failed at the provider")
    return missing / scored
