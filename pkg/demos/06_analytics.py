"""
Comparative analytics: topics, status, spread
=============================================

Compares the extracted misinformation set against a random comparison set on
three axes: topic distribution (with fractional weights for multi-topic
tweets), live-status breakdown, and time-binned spread curves. Counts are
exact rationals until the final report, so conservation checks hold.
"""
import tempfile
from pathlib import Path

from claimsift import synth
from claimsift.analytics import (
    live_status_breakdown,
    load_topic_annotations,
    sample_comparison_set,
    spread_power_curve,
    topic_distribution,
    topics_from_misinfo,
)
from claimsift.config import RunConfig
from claimsift.corpus import ingest_claims, ingest_spread_events, ingest_status_snapshot, ingest_tweets
from claimsift.pipeline import extract_misinformation
from claimsift.scorer import BaselineLexicalScorer

work = Path(tempfile.mkdtemp(prefix="claimsift_demo_"))
fixture = synth.build_fixture(work / "fixture", seed=0)
corpus = ingest_tweets(fixture["tweets"])
claims = ingest_claims(fixture["claims"])
misinfo = extract_misinformation(corpus, claims, BaselineLexicalScorer(), RunConfig())
mis_ids = misinfo.tweet_ids()

# the comparison set: corpus tweets outside the misinformation set
comparison = sample_comparison_set(corpus, mis_ids, n=200, seed=0)
print(f"misinformation set: {len(mis_ids)} tweets; comparison set: {len(comparison)}")

# topic mix: a tweet matched by claims in two topics counts 1/2 to each
topics_of = topics_from_misinfo(misinfo, claims)
dist = topic_distribution(mis_ids, topics_of)
print("\ntopic distribution of the misinformation set:")
for topic, share in sorted(dist.proportions.items(), key=lambda kv: -kv[1]):
    if share:
        print(f"  {topic.value:24s} {share:6.3f}  (weight {dist.counts[topic]})")

# live status at re-crawl time, side by side
snapshot = ingest_status_snapshot(fixture["snapshot"], corpus)
annotations = load_topic_annotations(fixture["topic_annotations"])
for name, ids, topics in (
    ("misinformation", mis_ids, topics_of),
    ("comparison", comparison, annotations),
):
    breakdown = live_status_breakdown(ids, snapshot, topics)
    print(f"\n{name}: {breakdown.inaccessible_rate:.1%} of {breakdown.total} no longer live")
    for status, count in sorted(breakdown.status_totals.items(), key=lambda kv: -kv[1]):
        print(f"  {status.value:18s} {count:4d}  ({count / breakdown.total:6.1%})")

# spread curves: events per tweet in 4h bins over the first 36h
events = ingest_spread_events(fixture["events"], corpus)
for name, ids in (("misinformation", mis_ids), ("comparison", comparison)):
    curve = spread_power_curve(ids, events, corpus)["overall"]
    cells = " ".join(f"{float(avg):5.2f}" for avg in curve.averages)
    print(f"\n{name} spread, avg events per tweet per {curve.bin_hours}h bin:")
    print(f"  [{cells}]  ({curve.flagged} events outside the {curve.horizon_hours}h horizon)")
