"""Prompt templates for the generative pipeline stages.

Templates are plain UTF-8 text with {placeholder} fields. Defaults ship
with the package and can be overridden per deployment by pointing
load_templates at a directory of <name>.txt files; each name requires an
exact placeholder set, checked at load time so a bad override fails fast
rather than mid-pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from string import Formatter

REQUIRED_PLACEHOLDERS: dict[str, frozenset[str]] = {
    "filtration": frozenset({"post", "candidates"}),
    "summarize_article_first": frozenset({"article"}),
    "summarize_article_last": frozenset({"article"}),
    "veracity_with_context": frozenset({"post", "context"}),
    "veracity_baseline": frozenset({"post"}),
    "overall_summary": frozenset({"post", "context"}),
}

TEMPLATE_NAMES = tuple(sorted(REQUIRED_PLACEHOLDERS))


def placeholders(body: str) -> set[str]:
    return {
        name for _, name, _, _ in Formatter().parse(body)
        if name is not None and name != ""
    }


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    body: str

    def __post_init__(self):
        required = REQUIRED_PLACEHOLDERS.get(self.name)
        if required is None:
            raise ValueError(f"unknown template name: {self.name!r}")
        found = placeholders(self.body)
        if found != set(required):
            raise ValueError(
                f"template {self.name!r} must use exactly {sorted(required)}, "
                f"found {sorted(found)}"
            )

    def render(self, **values: str) -> str:
        return self.body.format(**values)


class TemplateSet:
    """All pipeline templates, loaded once."""

    def __init__(self, templates: dict[str, PromptTemplate]):
        missing = set(TEMPLATE_NAMES) - set(templates)
        if missing:
            raise ValueError(f"missing templates: {sorted(missing)}")
        self._templates = templates

    def __getitem__(self, name: str) -> PromptTemplate:
        return self._templates[name]

    def render(self, name: str, **values: str) -> str:
        return self._templates[name].render(**values)


def load_templates(directory: str | Path | None = None) -> TemplateSet:
    """Load templates from a directory, falling back to the packaged defaults."""
    templates: dict[str, PromptTemplate] = {}
    default_root = resources.files(__package__) / "templates"
    for name in TEMPLATE_NAMES:
        body = None
        if directory is not None:
            override = Path(directory) / f"{name}.txt"
            if override.exists():
                body = override.read_text(encoding="utf-8")
        if body is None:
            body = (default_root / f"{name}.txt").read_text(encoding="utf-8")
        templates[name] = PromptTemplate(name=name, body=body.rstrip("\n"))
    return TemplateSet(templates)
