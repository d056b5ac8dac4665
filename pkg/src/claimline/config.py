"""Application configuration: one JSON file plus environment overrides.

Environment variables win over the file: CLAIMLINE_CONFIG points at the
file itself, CLAIMLINE_EMBED_ENDPOINT / CLAIMLINE_CHAT_ENDPOINT replace
the provider endpoints (switching that provider to remote), and
CLAIMLINE_ADMIN_TOKEN replaces the ingest token.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .corpus.io import open_corpus
from .corpus.types import Corpus
from .embedding.cache import CachingEmbedder, EmbeddingCache
from .embedding.provider import Embedder, EmbedderSpec
from .llm.provider import ChatClient, ChatSpec, load_chat_fixtures
from .llm.templates import TemplateSet, load_templates

ENV_CONFIG = "CLAIMLINE_CONFIG"
ENV_EMBED_ENDPOINT = "CLAIMLINE_EMBED_ENDPOINT"
ENV_CHAT_ENDPOINT = "CLAIMLINE_CHAT_ENDPOINT"
ENV_ADMIN_TOKEN = "CLAIMLINE_ADMIN_TOKEN"

DEFAULT_EMBEDDER = EmbedderSpec(kind="stub", model_name="stub-embedder", dim=64)


@dataclass(frozen=True)
class AppConfig:
    corpus_path: str | None = None
    embedder: EmbedderSpec = DEFAULT_EMBEDDER
    chat: ChatSpec | None = None
    chat_fixtures_path: str | None = None
    chat_default_reply: str | None = None
    templates_dir: str | None = None
    cache_path: str | None = None
    admin_token: str | None = None
    degraded_enabled: bool = True
    max_text_len: int = 8192
    top_k: int = 50
    cors_origins: tuple[str, ...] = ("*",)
    verify_delay_ms: int = 0  # testing aid: artificial latency inside verify
    harness: dict = field(default_factory=dict)
    criteria: dict = field(default_factory=dict)


def _embedder_from(payload: dict) -> EmbedderSpec:
    return EmbedderSpec(
        kind=payload.get("kind", "stub"),
        model_name=payload.get("model_name", "stub-embedder"),
        dim=int(payload.get("dim", 64)),
        endpoint=payload.get("endpoint"),
        batch_size=int(payload.get("batch_size", 32)),
        timeout=float(payload.get("timeout", 30.0)),
    )


def _chat_from(payload: dict) -> ChatSpec:
    return ChatSpec(
        kind=payload.get("kind", "stub"),
        model_name=payload.get("model_name", "stub-chat"),
        endpoint=payload.get("endpoint"),
        temperature=float(payload.get("temperature", 0.0)),
        max_output_tokens=int(payload.get("max_output_tokens", 1024)),
        timeout=float(payload.get("timeout", 60.0)),
    )


def load_config(path: str | Path | None = None, env: dict | None = None) -> AppConfig:
    """Load the config file (explicit path, else $CLAIMLINE_CONFIG, else defaults)."""
    env = os.environ if env is None else env
    if path is None:
        path = env.get(ENV_CONFIG)
    payload: dict = {}
    if path:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))

    embedder = _embedder_from(payload.get("embedder", {}))
    chat_payload = payload.get("chat")
    chat = _chat_from(chat_payload) if chat_payload else None

    if env.get(ENV_EMBED_ENDPOINT):
        embedder = replace(embedder, kind="remote", endpoint=env[ENV_EMBED_ENDPOINT])
    if env.get(ENV_CHAT_ENDPOINT):
        base = chat if chat is not None else _chat_from({})
        chat = replace(base, kind="remote", endpoint=env[ENV_CHAT_ENDPOINT])

    service = payload.get("service", {})
    admin_token = env.get(ENV_ADMIN_TOKEN) or service.get("admin_token")

    return AppConfig(
        corpus_path=payload.get("corpus_path"),
        embedder=embedder,
        chat=chat,
        chat_fixtures_path=(chat_payload or {}).get("fixtures_path"),
        chat_default_reply=(chat_payload or {}).get("default_reply"),
        templates_dir=payload.get("templates_dir"),
        cache_path=payload.get("cache_path"),
        admin_token=admin_token,
        degraded_enabled=bool(service.get("degraded_enabled", True)),
        max_text_len=int(service.get("max_text_len", 8192)),
        top_k=int(service.get("top_k", 50)),
        cors_origins=tuple(service.get("cors_origins", ["*"])),
        verify_delay_ms=int(service.get("verify_delay_ms", 0)),
        harness=payload.get("harness", {}),
        criteria=payload.get("criteria", {}),
    )


def make_embedder(config: AppConfig):
    embedder = Embedder(config.embedder)
    if config.cache_path:
        return CachingEmbedder(embedder, EmbeddingCache(config.cache_path))
    return embedder


def make_chat(config: AppConfig) -> ChatClient | None:
    if config.chat is None:
        return None
    fixtures = None
    if config.chat_fixtures_path:
        fixtures = load_chat_fixtures(config.chat_fixtures_path)
    return ChatClient(config.chat, fixtures=fixtures,
                      default_reply=config.chat_default_reply)


def make_templates(config: AppConfig) -> TemplateSet:
    return load_templates(config.templates_dir)


def load_app_corpus(config: AppConfig) -> Corpus | None:
    if not config.corpus_path:
        return None
    return open_corpus(config.corpus_path)
