"""
Corpus ingestion and quality reporting
======================================

Reads a tweet JSONL dump and a claim CSV, applies the source-tweet and
keyword retention rules, and prints the ingest ledgers. Runs against the
bundled synthetic fixture so it works offline.
"""
import tempfile
from pathlib import Path

from claimsift import synth
from claimsift.corpus import ingest_claims, ingest_status_snapshot, ingest_tweets

work = Path(tempfile.mkdtemp(prefix="claimsift_demo_"))
fixture = synth.build_fixture(work / "fixture", seed=0)

# tweets: only SOURCE tweets carrying a tracked keyword survive
corpus = ingest_tweets(fixture["tweets"])
report = corpus.report
print(f"read {report.read} lines -> retained {report.retained} source tweets")
print(f"  rejected by kind:    {report.rejected_by_kind}")
print(f"  rejected by keyword: {report.rejected_by_keyword}")
print(f"  malformed lines:     {report.malformed}")

# claims: id, text, debunk date, topic
claims = ingest_claims(fixture["claims"])
print(f"\nclaims: {len(claims)}")
for claim in list(claims)[:3]:
    print(f"  {claim.id}  {claim.debunk_date}  [{claim.topic.value}] {claim.text[:60]}")

# live-status snapshot: which tweets were still up at re-crawl time
snapshot = ingest_status_snapshot(fixture["snapshot"], corpus)
print(f"\nstatus snapshot: {len(snapshot.entries)} explicit entries, "
      f"{snapshot.defaulted} defaulted to LIVE, {snapshot.skipped_unknown} unknown ids skipped")

by_status: dict = {}
for tid in corpus.ids():
    status = snapshot.status_of(tid)
    by_status[status.value] = by_status.get(status.value, 0) + 1
for status, count in sorted(by_status.items()):
    print(f"  {status:18s} {count}")
