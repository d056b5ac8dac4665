from .provider import (
    ChatClient,
    ChatError,
    ChatProviderError,
    ChatSpec,
    ChatTransportError,
    EmptyCompletionError,
    StubReplyMissingError,
    chat,
    load_chat_fixtures,
    prompt_sha256,
)
from .stages import (
    FilterResult,
    VeracityVerdict,
    distribution_from_ratings,
    filter_candidates,
    format_candidates,
    format_context,
    parse_selection,
    parse_verdict_reply,
    predict_veracity,
    predict_veracity_baseline,
    summarize,
)
from .templates import (
    REQUIRED_PLACEHOLDERS,
    TEMPLATE_NAMES,
    PromptTemplate,
    TemplateSet,
    load_templates,
)

__all__ = [
    "ChatClient",
    "ChatError",
    "ChatProviderError",
    "ChatSpec",
    "ChatTransportError",
    "EmptyCompletionError",
    "FilterResult",
    "PromptTemplate",
    "REQUIRED_PLACEHOLDERS",
    "StubReplyMissingError",
    "TEMPLATE_NAMES",
    "TemplateSet",
    "VeracityVerdict",
    "chat",
    "distribution_from_ratings",
    "filter_candidates",
    "format_candidates",
    "format_context",
    "load_chat_fixtures",
    "load_templates",
    "parse_selection",
    "parse_verdict_reply",
    "predict_veracity",
    "predict_veracity_baseline",
    "prompt_sha256",
    "summarize",
]
