"""
End-to-end misinformation extraction
====================================

Runs the full funnel for every claim: BM25 pool, embedding rerank, temporal
window around the debunk date, pairwise scoring, and the acceptance
post-filter. Prints the per-claim survivor counts and saves the merged
misinformation set.
"""
import tempfile
from pathlib import Path

from claimsift import synth
from claimsift.config import RunConfig
from claimsift.corpus import ingest_claims, ingest_tweets
from claimsift.pipeline import collect_misinfo, run_all_claims
from claimsift.scorer import BaselineLexicalScorer

work = Path(tempfile.mkdtemp(prefix="claimsift_demo_"))
fixture = synth.build_fixture(work / "fixture", seed=0)
corpus = ingest_tweets(fixture["tweets"])
claims = ingest_claims(fixture["claims"])

cfg = RunConfig()
print(f"funnel: bm25 top {cfg.pipeline.k_bm25} -> rerank top {cfg.pipeline.k_rerank} -> "
      f"window -{cfg.pipeline.window_before_days}d/+{cfg.pipeline.window_after_days}d -> "
      f"score -> accept (conf >= {cfg.pipeline.conf_threshold} or term overlap)")

runs = run_all_claims(corpus, claims, BaselineLexicalScorer(), cfg)
print(f"\n{'claim':6s} {'bm25':>5s} {'rerank':>6s} {'window':>6s} {'scored':>6s} {'accepted':>8s}")
for run in runs:
    print(f"{run.claim_id:6s} {run.bm25:5d} {run.rerank:6d} {run.window:6d} "
          f"{run.scored:6d} {run.accepted:8d}")

misinfo = collect_misinfo(runs, cfg, BaselineLexicalScorer.kind.value)
print(f"\nmerged: {misinfo.manifest['total_pairs']} (claim, tweet) pairs, "
      f"{misinfo.manifest['distinct_tweets']} distinct tweets")

# a couple of accepted pairs with their labels and confidences
for pair in misinfo.pairs[:3]:
    tweet = corpus.get(pair.tweet_id)
    print(f"  {pair.claim_id} <- {pair.tweet_id} conf {pair.confidence:.2f}: {tweet.text[:60]}")

dest = work / "extraction"
misinfo.save(dest)
print(f"\nsaved pairs.jsonl + manifest.json under {dest}")
