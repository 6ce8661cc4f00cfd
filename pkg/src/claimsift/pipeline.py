"""Five-stage extraction pipeline.

Per claim: BM25 retrieval (top k_bm25) -> embedding cosine rerank (top
k_rerank) -> temporal window around the claim's debunk date (70 days before
through 14 after, inclusive, compared as UTC dates) -> pairwise scoring ->
precision post-filter (MISINFORMATION label and either confidence >= 0.95 or
subject/object overlap with the claim). Accepted pairs from all claims are
merged with (claim_id, tweet_id) as the dedup key.

Claims are independent, so they are scored on a thread pool; results are
merged in sorted claim order, which keeps the output deterministic for any
worker count.
"""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import timedelta
from pathlib import Path
from typing import Iterable, Sequence

from . import embedding, svo
from .config import RunConfig, canonical_json
from .corpus import Claim, ClaimSet, Corpus, Tweet
from .index import InvertedIndex
from .scorer import ExternalScorerError, Label, PairScorer

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairPrediction:
    claim_id: str
    tweet_id: str
    label: Label
    confidence: float

    def to_record(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "tweet_id": self.tweet_id,
            "label": self.label.value,
            "confidence": self.confidence,
        }


def temporal_filter(
    candidates: Sequence[str],
    claim: Claim,
    corpus: Corpus,
    before_days: int = 70,
    after_days: int = 14,
) -> list[str]:
    """Keep tweets created within [debunk - before_days, debunk + after_days]."""
    lo = claim.debunk_date - timedelta(days=before_days)
    hi = claim.debunk_date + timedelta(days=after_days)
    return [tid for tid in candidates if lo <= corpus.get(tid).created_at.date() <= hi]


def post_filter(
    prediction: PairPrediction,
    claim: Claim,
    tweet: Tweet,
    conf_threshold: float = 0.95,
    claim_terms: svo.SvoTerms | None = None,
) -> bool:
    """MISINFORMATION label and (confidence >= threshold OR SVO overlap)."""
    if prediction.label is not Label.MISINFORMATION:
        return False
    if prediction.confidence >= conf_threshold:
        return True
    terms = claim_terms if claim_terms is not None else svo.extract_svo(claim.text)
    return svo.shares_subject_or_object(terms, tweet.text)


@dataclass
class ClaimRun:
    """Per-claim funnel trace: stage survivor counts plus scored predictions."""

    claim_id: str
    bm25: int = 0
    rerank: int = 0
    window: int = 0
    scored: int = 0
    accepted: int = 0
    failed: bool = False
    error: str = ""
    predictions: list[PairPrediction] | None = None
    accepted_pairs: list[PairPrediction] | None = None

    def counts(self) -> dict:
        return {
            "bm25": self.bm25,
            "rerank": self.rerank,
            "window": self.window,
            "scored": self.scored,
            "accepted": self.accepted,
            "failed": self.failed,
            "error": self.error,
        }


class MisinfoSet:
    """Accepted pairs plus the run manifest (config hash, per-stage counts)."""

    def __init__(self, pairs: list[PairPrediction], manifest: dict):
        self.pairs = pairs
        self.manifest = manifest

    def __len__(self) -> int:
        return len(self.pairs)

    def pair_keys(self) -> set[tuple[str, str]]:
        return {(p.claim_id, p.tweet_id) for p in self.pairs}

    def tweet_ids(self) -> set[str]:
        return {p.tweet_id for p in self.pairs}

    def save(self, dest: str | Path) -> None:
        dest = Path(dest)
        dest.mkdir(parents=True, exist_ok=True)
        config_hash = self.manifest.get("config_hash", "")
        with open(dest / "pairs.jsonl", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(canonical_json({"_meta": {"config_hash": config_hash}}) + "\n")
            for pair in self.pairs:
                fh.write(canonical_json(pair.to_record()) + "\n")
        with open(dest / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(self.manifest, sort_keys=True, ensure_ascii=False, indent=2) + "\n")

    @classmethod
    def load(cls, src: str | Path) -> "MisinfoSet":
        src = Path(src)
        pairs = []
        with open(src / "pairs.jsonl", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                if "_meta" in rec:
                    continue
                pairs.append(
                    PairPrediction(
                        claim_id=rec["claim_id"],
                        tweet_id=rec["tweet_id"],
                        label=Label(rec["label"]),
                        confidence=float(rec["confidence"]),
                    )
                )
        manifest = json.loads((src / "manifest.json").read_text(encoding="utf-8"))
        return cls(pairs, manifest)


def run_claim(
    claim: Claim,
    corpus: Corpus,
    index: InvertedIndex,
    scorer: PairScorer,
    cfg: RunConfig,
    embedder: embedding.Embedder | None = None,
) -> ClaimRun:
    """Run stages 1-5 for one claim; any stage failure marks the claim failed."""
    run = ClaimRun(claim_id=claim.id, predictions=[], accepted_pairs=[])
    try:
        p = cfg.pipeline
        hits = index.search(claim.text, p.k_bm25)
        run.bm25 = len(hits)
        candidate_texts = {tid: corpus.text_of(tid) for tid, _ in hits}
        reranked = embedding.rerank(claim.text, candidate_texts, p.k_rerank, embedder)
        run.rerank = len(reranked)
        windowed = temporal_filter(
            [tid for tid, _ in reranked], claim, corpus, p.window_before_days, p.window_after_days
        )
        run.window = len(windowed)
        results = scorer.score_batch([(claim.text, corpus.text_of(tid)) for tid in windowed])
        claim_terms = svo.extract_svo(claim.text)
        for tid, (label, conf) in zip(windowed, results):
            pred = PairPrediction(claim.id, tid, label, conf)
            run.predictions.append(pred)
            if post_filter(pred, claim, corpus.get(tid), p.conf_threshold, claim_terms):
                run.accepted_pairs.append(pred)
        run.scored = len(run.predictions)
        run.accepted = len(run.accepted_pairs)
    except ExternalScorerError:
        raise  # endpoint already exhausted its retries; abort the run
    except Exception as exc:
        run.failed = True
        run.error = f"{type(exc).__name__}: {exc}"
        run.predictions = run.predictions or []
        run.accepted_pairs = []
        log.warning("claim %s failed: %s", claim.id, run.error)
    return run


def run_all_claims(
    corpus: Corpus,
    claims: ClaimSet,
    scorer: PairScorer,
    cfg: RunConfig,
    index: InvertedIndex | None = None,
    embedder: embedding.Embedder | None = None,
) -> list[ClaimRun]:
    """Stage 1-5 traces for every claim, in ascending claim-id order."""
    idx = index if index is not None else InvertedIndex.build(corpus)
    if embedder is None:
        embedder = embedding.CachedEmbedder(embedding.TrigramHashEmbedder())
    ordered = sorted(claims, key=lambda c: c.id)
    workers = cfg.workers if cfg.workers > 0 else (os.cpu_count() or 1)
    if workers == 1 or len(ordered) <= 1:
        return [run_claim(c, corpus, idx, scorer, cfg, embedder) for c in ordered]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: run_claim(c, corpus, idx, scorer, cfg, embedder), ordered))


def collect_misinfo(claim_runs: Iterable[ClaimRun], cfg: RunConfig, scorer_kind: str) -> MisinfoSet:
    """Merge per-claim accepted pairs; (claim_id, tweet_id) appears once."""
    pairs: list[PairPrediction] = []
    seen: set[tuple[str, str]] = set()
    claims_manifest: dict[str, dict] = {}
    for run in sorted(claim_runs, key=lambda r: r.claim_id):
        claims_manifest[run.claim_id] = run.counts()
        for pred in run.accepted_pairs or []:
            key = (pred.claim_id, pred.tweet_id)
            if key in seen:
                continue
            seen.add(key)
            pairs.append(pred)
    manifest = {
        "config_hash": cfg.config_hash(),
        "scorer_kind": scorer_kind,
        "claims": claims_manifest,
        "total_pairs": len(pairs),
        "distinct_tweets": len({p.tweet_id for p in pairs}),
        "failed_claims": sorted(cid for cid, c in claims_manifest.items() if c["failed"]),
    }
    return MisinfoSet(pairs, manifest)


def extract_misinformation(
    corpus: Corpus,
    claims: ClaimSet,
    scorer: PairScorer,
    cfg: RunConfig,
    index: InvertedIndex | None = None,
    embedder: embedding.Embedder | None = None,
    claim_runs: list[ClaimRun] | None = None,
) -> MisinfoSet:
    """Full extraction; pass precomputed claim_runs to reuse a scoring pass."""
    runs = (
        claim_runs
        if claim_runs is not None
        else run_all_claims(corpus, claims, scorer, cfg, index, embedder)
    )
    scorer_kind = getattr(getattr(scorer, "kind", None), "value", None) or str(
        getattr(scorer, "kind", "UNKNOWN")
    )
    return collect_misinfo(runs, cfg, scorer_kind)
