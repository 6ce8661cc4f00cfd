"""Comparative statistics over a tweet set: topic mix, live status, spread.

Topic weighting: a tweet matched to claims of m distinct topics contributes
1/m to each, kept as exact fractions so per-tweet weights always sum to 1
and every breakdown conserves counts exactly. Spread curves bin retweet and
quote events into half-open [k*bin, (k+1)*bin) offsets from the source
tweet's creation, 4-hour bins over a 36-hour horizon by default; tweets
with zero events stay in the denominators.
"""
from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Collection, Iterable, Mapping

from .corpus import (
    ClaimSet,
    Corpus,
    InputError,
    LiveStatus,
    LiveStatusSnapshot,
    SpreadEventLog,
    Topic,
    parse_topic,
)
from .pipeline import MisinfoSet

log = logging.getLogger(__name__)


def topics_from_misinfo(misinfo: MisinfoSet, claims: ClaimSet) -> dict[str, set[Topic]]:
    """tweet_id -> set of topics inherited from its matched claims."""
    out: dict[str, set[Topic]] = {}
    for pair in misinfo.pairs:
        out.setdefault(pair.tweet_id, set()).add(claims.get(pair.claim_id).topic)
    return out


def load_topic_annotations(path: str | Path) -> dict[str, set[Topic]]:
    """JSONL {tweet_id, topic} annotations (for the comparison sample)."""
    out: dict[str, set[Topic]] = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read topic annotations {path}: {exc}") from exc
    with fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            out.setdefault(str(rec["tweet_id"]), set()).add(parse_topic(rec["topic"]))
    return out


def topic_weights(
    tweet_ids: Iterable[str], topics_of: Mapping[str, Collection[Topic]]
) -> tuple[dict[str, dict[Topic, Fraction]], int]:
    """Exact per-tweet topic weights; unmatched tweets fall to OTHER, flagged."""
    weights: dict[str, dict[Topic, Fraction]] = {}
    flagged = 0
    for tid in tweet_ids:
        topics = sorted(set(topics_of.get(tid, ())), key=lambda t: t.value)
        if not topics:
            flagged += 1
            weights[tid] = {Topic.OTHER: Fraction(1)}
            continue
        share = Fraction(1, len(topics))
        weights[tid] = {topic: share for topic in topics}
    return weights, flagged


@dataclass
class TopicDistribution:
    counts: dict[Topic, Fraction]
    total: int
    flagged_no_topic: int

    @property
    def proportions(self) -> dict[Topic, float]:
        if self.total == 0:
            return {}
        return {t: float(c / self.total) for t, c in self.counts.items()}

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "flagged_no_topic": self.flagged_no_topic,
            "counts": {t.value: str(c) for t, c in sorted(self.counts.items(), key=lambda kv: kv[0].value)},
            "proportions": {
                t.value: p for t, p in sorted(self.proportions.items(), key=lambda kv: kv[0].value)
            },
        }


def topic_distribution(
    tweet_ids: Collection[str], topics_of: Mapping[str, Collection[Topic]]
) -> TopicDistribution:
    weights, flagged = topic_weights(tweet_ids, topics_of)
    counts: dict[Topic, Fraction] = {}
    for per_tweet in weights.values():
        for topic, w in per_tweet.items():
            counts[topic] = counts.get(topic, Fraction(0)) + w
    if flagged:
        log.warning("%d tweets had no topic source; counted under OTHER", flagged)
    return TopicDistribution(counts, len(weights), flagged)


@dataclass
class StatusBreakdown:
    table: dict[Topic, dict[LiveStatus, Fraction]]
    status_totals: dict[LiveStatus, int]
    total: int

    @property
    def live_rate(self) -> float:
        if self.total == 0:
            return 0.0
        return self.status_totals.get(LiveStatus.LIVE, 0) / self.total

    @property
    def inaccessible_rate(self) -> float:
        return 1.0 - self.live_rate if self.total else 0.0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "live_rate": self.live_rate,
            "inaccessible_rate": self.inaccessible_rate,
            "status_totals": {
                s.value: n for s, n in sorted(self.status_totals.items(), key=lambda kv: kv[0].value)
            },
            "table": {
                t.value: {s.value: str(c) for s, c in sorted(row.items(), key=lambda kv: kv[0].value)}
                for t, row in sorted(self.table.items(), key=lambda kv: kv[0].value)
            },
        }


def live_status_breakdown(
    tweet_ids: Collection[str],
    snapshot: LiveStatusSnapshot,
    topics_of: Mapping[str, Collection[Topic]],
) -> StatusBreakdown:
    """Topic x status table with fractional topic weights; statuses are crisp,
    so each topic row sums to that topic's weighted tweet count and the grand
    total equals the set size exactly."""
    weights, _ = topic_weights(tweet_ids, topics_of)
    table: dict[Topic, dict[LiveStatus, Fraction]] = {}
    status_totals: dict[LiveStatus, int] = {}
    for tid, per_tweet in weights.items():
        status = snapshot.status_of(tid)
        status_totals[status] = status_totals.get(status, 0) + 1
        for topic, w in per_tweet.items():
            row = table.setdefault(topic, {})
            row[status] = row.get(status, Fraction(0)) + w
    return StatusBreakdown(table, status_totals, len(weights))


@dataclass
class SpreadCurve:
    bin_hours: int
    horizon_hours: int
    set_size: Fraction
    bin_totals: list[Fraction]
    flagged: int = 0  # events outside the horizon (informational)

    @property
    def n_bins(self) -> int:
        return self.horizon_hours // self.bin_hours

    @property
    def averages(self) -> list[Fraction]:
        if self.set_size == 0:
            return [Fraction(0) for _ in self.bin_totals]
        return [total / self.set_size for total in self.bin_totals]

    @property
    def cumulative_average(self) -> Fraction:
        if self.set_size == 0:
            return Fraction(0)
        return sum(self.bin_totals, Fraction(0)) / self.set_size

    def to_dict(self) -> dict:
        return {
            "bin_hours": self.bin_hours,
            "horizon_hours": self.horizon_hours,
            "set_size": str(self.set_size),
            "bin_totals": [str(t) for t in self.bin_totals],
            "averages": [float(a) for a in self.averages],
            "cumulative_average": float(self.cumulative_average),
            "events_outside_horizon": self.flagged,
        }


def spread_power_curve(
    tweet_ids: Collection[str],
    events: SpreadEventLog,
    corpus: Corpus,
    bin_hours: int = 4,
    horizon_hours: int = 36,
    topics_of: Mapping[str, Collection[Topic]] | None = None,
) -> dict:
    """Overall curve plus per-topic curves when a topic join is given."""
    if bin_hours <= 0 or horizon_hours <= 0 or horizon_hours % bin_hours != 0:
        raise ValueError(
            f"horizon ({horizon_hours}h) must be a positive multiple of the bin width ({bin_hours}h)"
        )
    n_bins = horizon_hours // bin_hours
    bin_seconds = bin_hours * 3600
    horizon_seconds = horizon_hours * 3600

    weights, _ = (
        topic_weights(tweet_ids, topics_of) if topics_of is not None else ({tid: {} for tid in tweet_ids}, 0)
    )
    overall = SpreadCurve(bin_hours, horizon_hours, Fraction(len(weights)), [Fraction(0)] * n_bins)
    by_topic: dict[Topic, SpreadCurve] = {}

    def topic_curve(topic: Topic) -> SpreadCurve:
        if topic not in by_topic:
            by_topic[topic] = SpreadCurve(bin_hours, horizon_hours, Fraction(0), [Fraction(0)] * n_bins)
        return by_topic[topic]

    for tid, per_tweet in weights.items():
        for topic, w in per_tweet.items():
            topic_curve(topic).set_size += w
        created = corpus.get(tid).created_at
        for ev in events.events_for(tid):
            delta = (ev.event_time - created).total_seconds()
            if not 0 <= delta < horizon_seconds:
                overall.flagged += 1
                continue
            k = int(delta // bin_seconds)
            overall.bin_totals[k] += 1
            for topic, w in per_tweet.items():
                topic_curve(topic).bin_totals[k] += w

    result = {"overall": overall}
    if topics_of is not None:
        result["by_topic"] = dict(sorted(by_topic.items(), key=lambda kv: kv[0].value))
    return result


def sample_comparison_set(
    corpus: Corpus, exclude: Collection[str], n: int = 20000, seed: int = 0
) -> list[str]:
    """Seeded uniform sample (no replacement) of source tweets outside the
    exclude set; returns all candidates with a warning when n exceeds them."""
    excluded = set(exclude)
    candidates = sorted(tid for tid in corpus.ids() if tid not in excluded)
    if n >= len(candidates):
        if n > len(candidates):
            log.warning(
                "requested comparison sample of %d but only %d candidates; taking all",
                n,
                len(candidates),
            )
        return candidates
    rng = random.Random(seed)
    return sorted(rng.sample(candidates, n))
