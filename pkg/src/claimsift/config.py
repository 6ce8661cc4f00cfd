"""Run configuration, canonical hashing, and artifact provenance helpers.

A run is driven by one JSON config file. Every field has a default; the
pipeline constants default to the reference values (k_bm25 20,000, k_rerank
1,000, window 70 days before / 14 after the debunk date, acceptance
confidence 0.95, enrichment confidence 0.7). The config hash is the sha256
of the canonical JSON of the resolved config minus fields that cannot change
results (run_dir, workers); it is stamped into every artifact so outputs are
traceable to the exact configuration that produced them.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Any


class ConfigError(ValueError):
    """Config file is invalid; message carries field-level diagnostics."""


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class Paths:
    tweets: str = ""
    claims: str = ""
    snapshot: str = ""
    events: str = ""
    labeled_pairs: str = ""
    seed_annotated: str = ""
    covidlies: str = ""
    ifcn_articles: str = ""
    debunk_urls: str = ""
    topic_annotations: str = ""
    keywords: str = ""           # empty -> bundled default list
    credible_accounts: str = ""  # empty -> bundled default list
    lexicon: str = ""            # empty -> bundled demo lexicon


@dataclass
class IngestParams:
    collection_start: str = ""  # ISO date; empty = unbounded
    collection_end: str = ""


@dataclass
class PipelineParams:
    k_bm25: int = 20000
    k_rerank: int = 1000
    window_before_days: int = 70
    window_after_days: int = 14
    conf_threshold: float = 0.95
    tau_match: float = 0.5


@dataclass
class EnrichParams:
    conf_threshold: float = 0.7


@dataclass
class EvalParams:
    folds: int = 5


@dataclass
class AnalyticsParams:
    bin_hours: int = 4
    horizon_hours: int = 36
    n_comparison: int = 20000


@dataclass
class LingStatsParams:
    min_df_exclusive: int = 3
    max_df_ratio: float = 0.4
    top_k_features: int = 5000
    alpha: float = 0.05
    top_k_report: int = 10


@dataclass
class ScorerParams:
    kind: str = "BASELINE_LEXICAL"
    endpoint: str = ""
    timeout: float = 30.0
    retries: int = 3
    batch_size: int = 32
    deterministic: bool = True


@dataclass
class EmbedderParams:
    kind: str = "TRIGRAM_HASH"  # or EXTERNAL
    endpoint: str = ""
    dim: int = 512


@dataclass
class RunConfig:
    paths: Paths = field(default_factory=Paths)
    ingest: IngestParams = field(default_factory=IngestParams)
    pipeline: PipelineParams = field(default_factory=PipelineParams)
    enrich: EnrichParams = field(default_factory=EnrichParams)
    eval: EvalParams = field(default_factory=EvalParams)
    analytics: AnalyticsParams = field(default_factory=AnalyticsParams)
    lingstats: LingStatsParams = field(default_factory=LingStatsParams)
    scorer: ScorerParams = field(default_factory=ScorerParams)
    embedder: EmbedderParams = field(default_factory=EmbedderParams)
    seed: int = 0
    workers: int = 0  # 0 -> one worker per available core
    run_dir: str = "run"

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        material = self.to_dict()
        material.pop("run_dir")
        material.pop("workers")
        return sha256_text(canonical_json(material))

    def validate(self) -> None:
        problems = []
        positive_int = {
            "pipeline.k_bm25": self.pipeline.k_bm25,
            "pipeline.k_rerank": self.pipeline.k_rerank,
            "pipeline.window_before_days": self.pipeline.window_before_days,
            "pipeline.window_after_days": self.pipeline.window_after_days,
            "eval.folds": self.eval.folds,
            "analytics.bin_hours": self.analytics.bin_hours,
            "analytics.horizon_hours": self.analytics.horizon_hours,
            "analytics.n_comparison": self.analytics.n_comparison,
            "lingstats.top_k_features": self.lingstats.top_k_features,
            "lingstats.top_k_report": self.lingstats.top_k_report,
            "embedder.dim": self.embedder.dim,
            "scorer.retries": self.scorer.retries,
            "scorer.batch_size": self.scorer.batch_size,
        }
        for name, value in positive_int.items():
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                problems.append(f"{name}: must be a positive integer, got {value!r}")
        unit_interval = {
            "pipeline.conf_threshold": self.pipeline.conf_threshold,
            "pipeline.tau_match": self.pipeline.tau_match,
            "enrich.conf_threshold": self.enrich.conf_threshold,
            "lingstats.max_df_ratio": self.lingstats.max_df_ratio,
            "lingstats.alpha": self.lingstats.alpha,
        }
        for name, value in unit_interval.items():
            if not isinstance(value, (int, float)) or not 0.0 < float(value) <= 1.0:
                problems.append(f"{name}: must be in (0, 1], got {value!r}")
        if self.lingstats.min_df_exclusive < 0:
            problems.append(f"lingstats.min_df_exclusive: must be >= 0, got {self.lingstats.min_df_exclusive!r}")
        if self.scorer.kind not in ("BASELINE_LEXICAL", "EXTERNAL"):
            problems.append(f"scorer.kind: unknown kind {self.scorer.kind!r}")
        if self.scorer.kind == "EXTERNAL" and not self.scorer.endpoint:
            problems.append("scorer.endpoint: required when scorer.kind is EXTERNAL")
        if self.embedder.kind not in ("TRIGRAM_HASH", "EXTERNAL"):
            problems.append(f"embedder.kind: unknown kind {self.embedder.kind!r}")
        if self.embedder.kind == "EXTERNAL" and not self.embedder.endpoint:
            problems.append("embedder.endpoint: required when embedder.kind is EXTERNAL")
        for name, value in (
            ("ingest.collection_start", self.ingest.collection_start),
            ("ingest.collection_end", self.ingest.collection_end),
        ):
            if value:
                try:
                    date.fromisoformat(value)
                except ValueError:
                    problems.append(f"{name}: not an ISO date: {value!r}")
        if self.workers < 0:
            problems.append(f"workers: must be >= 0, got {self.workers!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            problems.append(f"seed: must be an integer, got {self.seed!r}")
        if problems:
            raise ConfigError("invalid config:\n  " + "\n  ".join(problems))


_SECTION_TYPES = {
    "paths": Paths,
    "ingest": IngestParams,
    "pipeline": PipelineParams,
    "enrich": EnrichParams,
    "eval": EvalParams,
    "analytics": AnalyticsParams,
    "lingstats": LingStatsParams,
    "scorer": ScorerParams,
    "embedder": EmbedderParams,
}


def _build_section(cls, data: dict, section: str):
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"invalid config:\n  {section}: unknown keys {unknown}")
    return cls(**data)


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("invalid config:\n  top level must be an object")
    known_top = set(_SECTION_TYPES) | {"seed", "workers", "run_dir"}
    unknown = sorted(set(data) - known_top)
    if unknown:
        raise ConfigError(f"invalid config:\n  top level: unknown keys {unknown}")
    kwargs: dict[str, Any] = {}
    for name, cls in _SECTION_TYPES.items():
        section = data.get(name, {})
        if not isinstance(section, dict):
            raise ConfigError(f"invalid config:\n  {name}: must be an object")
        kwargs[name] = _build_section(cls, section, name)
    cfg = RunConfig(
        seed=data.get("seed", 0),
        workers=data.get("workers", 0),
        run_dir=str(data.get("run_dir", "run")),
        **kwargs,
    )
    cfg.validate()
    return cfg


def load_config(path: str | Path) -> RunConfig:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except ValueError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)


def write_json_artifact(path: str | Path, payload: dict, config_hash: str) -> None:
    """JSON artifact with the config hash as a field; stable byte output."""
    body = dict(payload)
    body["config_hash"] = config_hash
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(body, sort_keys=True, ensure_ascii=False, indent=2) + "\n")


def write_jsonl_artifact(path: str | Path, records: list[dict], config_hash: str) -> None:
    """JSONL artifact whose first record is a _meta line with the hash."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(canonical_json({"_meta": {"config_hash": config_hash}}) + "\n")
        for rec in records:
            fh.write(canonical_json(rec) + "\n")


def write_csv_artifact(path: str | Path, header: list[str], rows: list[list], config_hash: str) -> None:
    """CSV artifact with a leading comment line naming the config hash."""
    lines = [f"# config_hash={config_hash}", ",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _csv_cell(value) -> str:
    text = repr(value) if isinstance(value, float) else str(value)
    if any(ch in text for ch in ",\"\n"):
        text = '"' + text.replace('"', '""') + '"'
    return text
