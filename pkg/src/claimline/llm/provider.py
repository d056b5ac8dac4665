"""Chat-completion providers: remote HTTP services and a scripted stub.

The remote provider speaks the OpenAI-compatible chat protocol. The stub
replays canned replies keyed by the SHA-256 of the rendered prompt, which
makes whole-pipeline integration tests runnable offline and bit-for-bit
reproducible. A custom handler callable can be injected for test doubles
that need to compute their reply from the prompt.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import httpx

MAX_ATTEMPTS = 3


class ChatError(RuntimeError):
    pass


class ChatTransportError(ChatError):
    """Network or server failure after exhausting retries."""


class ChatProviderError(ChatError):
    """Provider answered with an error payload, surfaced verbatim."""

    def __init__(self, status_code: int, payload: str):
        super().__init__(f"provider error HTTP {status_code}: {payload[:500]}")
        self.status_code = status_code
        self.payload = payload


class EmptyCompletionError(ChatError):
    """Provider returned an empty completion."""


class StubReplyMissingError(ChatError):
    """No fixture entry for this prompt and no default reply configured."""


@dataclass(frozen=True)
class ChatSpec:
    """Configuration of one chat provider."""

    kind: str  # "remote" | "stub"
    model_name: str
    endpoint: str | None = None
    temperature: float = 0.0
    max_output_tokens: int = 1024
    timeout: float = 60.0

    def __post_init__(self):
        if self.kind not in ("remote", "stub"):
            raise ValueError(f"unknown chat kind: {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ValueError("remote chat provider requires an endpoint")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")


def prompt_sha256(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


def load_chat_fixtures(path: str | Path) -> dict[str, str]:
    """Read a stub fixture file: JSONL of {"prompt_sha256": ..., "reply": ...}."""
    fixtures: dict[str, str] = {}
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            fixtures[record["prompt_sha256"]] = record["reply"]
    return fixtures


class ChatClient:
    """Chat client for one ChatSpec; ``calls`` counts provider round trips.

    ``max_concurrency`` bounds in-flight provider calls across threads;
    None leaves them unbounded.
    """

    def __init__(self, spec: ChatSpec,
                 fixtures: dict[str, str] | None = None,
                 default_reply: str | None = None,
                 handler: Callable[[str], str] | None = None,
                 client: httpx.Client | None = None,
                 retry_base_delay: float = 0.25,
                 max_concurrency: int | None = None):
        self.spec = spec
        self.calls = 0
        self._calls_lock = threading.Lock()
        self._fixtures = fixtures or {}
        self._default_reply = default_reply
        self._handler = handler
        self._retry_base_delay = retry_base_delay
        self._limiter = (threading.Semaphore(max_concurrency)
                         if max_concurrency else None)
        self._client = client
        if spec.kind == "remote" and client is None:
            self._client = httpx.Client(timeout=spec.timeout)

    def add_fixture(self, prompt: str, reply: str) -> None:
        self._fixtures[prompt_sha256(prompt)] = reply

    def chat(self, prompt: str) -> str:
        """Send one prompt, return the completion text."""
        if not prompt or not prompt.strip():
            raise ValueError("prompt must be non-empty")
        with self._calls_lock:
            self.calls += 1
        if self._limiter is not None:
            with self._limiter:
                return self._dispatch(prompt)
        return self._dispatch(prompt)

    def _dispatch(self, prompt: str) -> str:
        if self._handler is not None:
            reply = self._handler(prompt)
        elif self.spec.kind == "stub":
            key = prompt_sha256(prompt)
            if key in self._fixtures:
                reply = self._fixtures[key]
            elif self._default_reply is not None:
                reply = self._default_reply
            else:
                raise StubReplyMissingError(f"no stub reply for prompt hash {key[:12]}…")
        else:
            reply = self._chat_remote(prompt)
        if not reply or not reply.strip():
            raise EmptyCompletionError("provider returned an empty completion")
        return reply

    def _chat_remote(self, prompt: str) -> str:
        payload = {
            "model": self.spec.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.spec.temperature,
            "max_tokens": self.spec.max_output_tokens,
        }
        last_exc: Exception | None = None
        for attempt in range(MAX_ATTEMPTS):
            try:
                resp = self._client.post(self.spec.endpoint, json=payload)
            except httpx.HTTPError as exc:
                last_exc = exc
                time.sleep(self._retry_base_delay * (2 ** attempt))
                continue
            if resp.status_code >= 500 or resp.status_code == 429:
                last_exc = ChatTransportError(f"HTTP {resp.status_code}")
                time.sleep(self._retry_base_delay * (2 ** attempt))
                continue
            if resp.status_code >= 400:
                raise ChatProviderError(resp.status_code, resp.text)
            data = resp.json()
            try:
                return data["choices"][0]["message"]["content"] or ""
            except (KeyError, IndexError, TypeError) as exc:
                raise ChatProviderError(resp.status_code, resp.text) from exc
        raise ChatTransportError(
            f"transport failed after {MAX_ATTEMPTS} attempts: {last_exc}"
        ) from last_exc


def chat(spec: ChatSpec | ChatClient, prompt: str, **kwargs) -> str:
    """One-shot convenience wrapper around ChatClient.chat."""
    client = spec if isinstance(spec, ChatClient) else ChatClient(spec, **kwargs)
    return client.chat(prompt)
