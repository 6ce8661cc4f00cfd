"""
Training-set enrichment from four sources
=========================================

Grows a labeled (claim, text) dataset from the collection itself plus three
import adapters: fact-check articles, an external stance dataset, and seed
annotations. High-confidence predictions become silver labels when a
removal, debunk-link, or credible-author rule fires; every sample keeps its
provenance and the rule that admitted it.
"""
import tempfile
from pathlib import Path

from claimsift import synth
from claimsift.config import RunConfig
from claimsift.corpus import ingest_claims, ingest_status_snapshot, ingest_tweets
from claimsift.enrichment import (
    clean_pairs,
    dataset_report,
    enrich_from_collection,
    enrich_from_ifcn,
    load_covidlies,
    load_credible_accounts,
    load_debunk_urls,
    load_ifcn_articles,
    load_seed_annotated,
)
from claimsift.pipeline import run_all_claims
from claimsift.scorer import BaselineLexicalScorer

work = Path(tempfile.mkdtemp(prefix="claimsift_demo_"))
fixture = synth.build_fixture(work / "fixture", seed=0)
corpus = ingest_tweets(fixture["tweets"])
claims = ingest_claims(fixture["claims"])

# source 1: the scored collection, filtered by the rule set
runs = run_all_claims(corpus, claims, BaselineLexicalScorer(), RunConfig())
snapshot = ingest_status_snapshot(fixture["snapshot"], corpus)
collected, report = enrich_from_collection(
    corpus,
    claims,
    runs,
    snapshot,
    load_debunk_urls(fixture["debunk_urls"]),
    load_credible_accounts(),
)
print("collection rules:", report)
for sample in collected[:3]:
    print(f"  rule {sample.rule}: [{sample.label.value}] {sample.sample_text[:55]}")

# source 2: fact-check articles, explanation plus quoted claim spans
articles = load_ifcn_articles(fixture["ifcn_articles"])
ifcn = enrich_from_ifcn(articles)
print(f"\nfact-check articles: {len(articles)} articles -> {len(ifcn)} samples")

# source 3: external stance dataset with a label translation
covidlies = load_covidlies(fixture["covidlies"])
print(f"stance dataset: {len(covidlies)} samples")

# source 4: seed annotations
seed = load_seed_annotated(fixture["seed_annotated"])
print(f"seed annotations: {len(seed)} samples")

# drop pairs whose text mentions neither the claim's subject nor object
merged = collected + ifcn + covidlies + seed
kept, discarded = clean_pairs(merged)
print(f"\nclean_pairs: {len(merged)} -> kept {len(kept)}, discarded {len(discarded)}")

table = dataset_report(kept)
print(f"\nfinal dataset: {table['total']} samples")
print(f"  by label:  {table['label_totals']}")
for source, counts in table["by_source"].items():
    print(f"  {source:15s} {counts}")
