"""Experiment configuration and report types.

Reports are per-language (or per-setting) metric tables with an
unweighted aggregate row, mirroring how the evaluations average across
languages. The canonical JSON serialization is deterministic: given the
same config, corpus, stub fixtures and seed, two runs produce
byte-identical report files. Wall-clock provenance therefore goes to a
sidecar log, never into the canonical JSON.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..embedding.provider import EmbedderSpec
from ..llm.provider import ChatSpec


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    corpus_path: str
    embedder: EmbedderSpec
    chat: ChatSpec | None = None
    k_retrieve: int = 50
    k_report: int = 10
    languages: tuple[str, ...] = ()
    seed: int = 0
    output_dir: str | None = None
    include_bm25: bool = True
    parallelism: int = 1

    def __post_init__(self):
        if self.k_report > self.k_retrieve:
            raise ValueError("k_report must be <= k_retrieve")
        if self.k_retrieve < 1:
            raise ValueError("k_retrieve must be >= 1")

    def config_hash(self) -> str:
        payload = asdict(self)
        payload.pop("output_dir", None)
        canon = json.dumps(payload, sort_keys=True, default=str)
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


def provenance_for(cfg: ExperimentConfig) -> dict[str, str | int]:
    return {
        "config_hash": cfg.config_hash(),
        "embedder_model": cfg.embedder.model_name,
        "chat_model": cfg.chat.model_name if cfg.chat else "",
        "seed": cfg.seed,
    }


@dataclass
class ExperimentReport:
    """Per-group metric tables plus their unweighted mean."""

    name: str
    per_language: dict[str, dict[str, float]]
    aggregate: dict[str, float] = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)  # per-query rows for CSV export

    @classmethod
    def build(cls, name: str, per_language: dict[str, dict[str, float]],
              provenance: dict, warnings: list[str] | None = None,
              rows: list[dict] | None = None) -> "ExperimentReport":
        aggregate: dict[str, float] = {}
        if per_language:
            shared = set.intersection(*(set(m) for m in per_language.values()))
            for key in sorted(shared):
                values = [per_language[lang][key] for lang in per_language]
                if all(isinstance(v, (int, float)) and v is not None for v in values):
                    aggregate[key] = sum(values) / len(values)
        return cls(name=name, per_language=per_language, aggregate=aggregate,
                   provenance=provenance, warnings=warnings or [], rows=rows or [])

    def to_json(self) -> str:
        payload = {
            "name": self.name,
            "per_language": self.per_language,
            "aggregate": self.aggregate,
            "provenance": self.provenance,
            "warnings": self.warnings,
        }
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_table(self) -> str:
        """Aligned plain-text table: one row per group plus the average."""
        if not self.per_language:
            return f"{self.name}: no results\n"
        keys = sorted({k for m in self.per_language.values() for k in m})
        header = ["group"] + keys
        lines = [header]
        for lang in sorted(self.per_language):
            row = [lang]
            for key in keys:
                value = self.per_language[lang].get(key)
                row.append("-" if value is None else f"{value:.4f}")
            lines.append(row)
        avg_row = ["avg"]
        for key in keys:
            value = self.aggregate.get(key)
            avg_row.append("-" if value is None else f"{value:.4f}")
        lines.append(avg_row)
        widths = [max(len(row[i]) for row in lines) for i in range(len(header))]
        rendered = [
            "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
            for row in lines
        ]
        rendered.insert(1, "  ".join("-" * w for w in widths))
        return f"# {self.name}\n" + "\n".join(rendered) + "\n"

    def save(self, out_dir: str | Path) -> Path:
        """Write <name>.json, <name>.txt, <name>.csv and a run log; return JSON path."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        json_path = out_dir / f"{self.name}.json"
        json_path.write_text(self.to_json(), encoding="utf-8")
        (out_dir / f"{self.name}.txt").write_text(self.to_table(), encoding="utf-8")
        if self.rows:
            fieldnames = sorted({k for row in self.rows for k in row})
            with (out_dir / f"{self.name}.csv").open("w", encoding="utf-8", newline="") as fh:
                writer = csv.DictWriter(fh, fieldnames=fieldnames)
                writer.writeheader()
                writer.writerows(self.rows)
        log_path = out_dir / f"{self.name}.log"
        log_path.write_text(
            f"finished_at: {datetime.now(timezone.utc).isoformat()}\n"
            f"config_hash: {self.provenance.get('config_hash', '')}\n",
            encoding="utf-8",
        )
        return json_path
