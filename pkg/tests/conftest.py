from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import (  # noqa: E402
    build_fixture_corpus,
    make_chat,
    make_stub_embedder,
)

from claimline.llm.templates import load_templates  # noqa: E402


@pytest.fixture(scope="session")
def templates():
    return load_templates()


@pytest.fixture
def stub_embedder():
    return make_stub_embedder()


@pytest.fixture(scope="session")
def fixture_corpus():
    return build_fixture_corpus()


@pytest.fixture
def chat_factory():
    return make_chat
