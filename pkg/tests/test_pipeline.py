import pytest

from claimline.corpus.types import VeracityLabel
from claimline.harness.runners import claim_index
from claimline.llm.provider import ChatError, ChatTransportError
from claimline.pipeline import run_pipeline

from helpers import PipelineChatHandler, make_chat, make_stub_embedder

QUERY = "The es claim number 1 about subject 1 is circulating."


@pytest.fixture()
def parts(fixture_corpus):
    embedder = make_stub_embedder()
    index = claim_index(fixture_corpus, embedder)
    return fixture_corpus, index, embedder


class TestRunPipeline:
    def test_full_run_partitions_candidates(self, parts, templates):
        corpus, index, embedder = parts
        chat = make_chat(handler=PipelineChatHandler(corpus, keep="oracle"))
        output = run_pipeline(QUERY, corpus=corpus, index=index, embedder=embedder,
                              chat=chat, templates=templates, top_k_n=10)
        assert len(output.retrieved) == 10
        relevant_ids = {item.factcheck.id for item in output.relevant}
        irrelevant_ids = {item.factcheck.id for item in output.irrelevant}
        assert relevant_ids == {"fc-es-1"}
        assert relevant_ids.isdisjoint(irrelevant_ids)
        assert relevant_ids | irrelevant_ids == set(output.retrieved.ids())
        assert output.verdict.distribution[VeracityLabel.TRUE] == 1

    def test_timing_keys_present(self, parts, templates):
        corpus, index, embedder = parts
        chat = make_chat(handler=PipelineChatHandler(corpus, keep="oracle"))
        output = run_pipeline(QUERY, corpus=corpus, index=index, embedder=embedder,
                              chat=chat, templates=templates, top_k_n=5)
        for key in ("retrieve_ms", "filter_ms", "summarize_ms", "verdict_ms"):
            assert output.timing_ms[key] >= 0.0

    def test_no_chat_degrades(self, parts, templates):
        corpus, index, embedder = parts
        output = run_pipeline(QUERY, corpus=corpus, index=index, embedder=embedder,
                              chat=None, templates=templates, top_k_n=5)
        assert output.degraded
        assert output.relevant == []
        assert len(output.irrelevant) == 5
        assert output.verdict.label is VeracityLabel.UNVERIFIABLE

    def test_chat_failure_degrades_when_enabled(self, parts, templates):
        corpus, index, embedder = parts

        def broken(prompt):
            raise ChatTransportError("down")

        output = run_pipeline(QUERY, corpus=corpus, index=index, embedder=embedder,
                              chat=make_chat(handler=broken), templates=templates,
                              top_k_n=5)
        assert output.degraded
        assert output.warnings

    def test_chat_failure_raises_when_disabled(self, parts, templates):
        corpus, index, embedder = parts

        def broken(prompt):
            raise ChatTransportError("down")

        with pytest.raises(ChatError):
            run_pipeline(QUERY, corpus=corpus, index=index, embedder=embedder,
                         chat=make_chat(handler=broken), templates=templates,
                         top_k_n=5, degraded_enabled=False)

    def test_overall_summary_toggle(self, parts, templates):
        corpus, index, embedder = parts
        chat = make_chat(handler=PipelineChatHandler(corpus, keep="oracle"))
        output = run_pipeline(QUERY, corpus=corpus, index=index, embedder=embedder,
                              chat=chat, templates=templates, top_k_n=5,
                              with_overall_summary=False)
        assert output.overall_summary == ""

    def test_summaries_skip_articleless_factchecks(self, parts, templates):
        from dataclasses import replace

        corpus, index, embedder = parts
        fcs = dict(corpus.fact_checks)
        fcs["fc-es-1"] = replace(fcs["fc-es-1"], article_text=None)
        stripped = type(corpus)(fact_checks=fcs, posts=corpus.posts)
        chat = make_chat(handler=PipelineChatHandler(stripped, keep="oracle"))
        output = run_pipeline(QUERY, corpus=stripped, index=index, embedder=embedder,
                              chat=chat, templates=templates, top_k_n=5)
        assert output.relevant[0].summary == ""
