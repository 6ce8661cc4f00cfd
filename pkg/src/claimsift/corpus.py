"""Ingestion and validation of the tweet corpus and its companion files.

Input formats (all UTF-8, documented in the README):
  tweets.jsonl           one JSON object per line:
                         {"id", "text", "author_id", "author_handle",
                          "created_at", "kind", "urls"}
  claims.csv / .jsonl    id, text, debunk_date, topic, fact_checker, debunk_url
  status_snapshot.jsonl  optional {"snapshot_date": ...} header record, then
                         {"tweet_id", "status"} records
  spread_events.jsonl    {"source_tweet_id", "kind", "event_time"} records
"""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from . import textnorm

log = logging.getLogger(__name__)


class TweetKind(str, Enum):
    SOURCE = "SOURCE"
    RETWEET = "RETWEET"
    REPLY = "REPLY"
    QUOTE = "QUOTE"


class LiveStatus(str, Enum):
    LIVE = "LIVE"
    ACCOUNT_SUSPENDED = "ACCOUNT_SUSPENDED"
    ACCOUNT_DELETED = "ACCOUNT_DELETED"
    TWEET_DELETED = "TWEET_DELETED"
    OTHER = "OTHER"


class SpreadKind(str, Enum):
    RETWEET = "RETWEET"
    QUOTE = "QUOTE"


class Topic(str, Enum):
    CONSPIRACY_THEORY = "CONSPIRACY_THEORY"
    MEDICAL_ADVICE = "MEDICAL_ADVICE"
    PROMINENT_ACTORS = "PROMINENT_ACTORS"
    COMMUNITY_SPREAD = "COMMUNITY_SPREAD"
    PUBLIC_AUTHORITY_ACTION = "PUBLIC_AUTHORITY_ACTION"
    VIRUS_ORIGIN = "VIRUS_ORIGIN"
    PUBLIC_PREPARATION = "PUBLIC_PREPARATION"
    OTHER = "OTHER"


_TOPIC_ALIASES = {
    "conspiracy theory": Topic.CONSPIRACY_THEORY,
    "conspiracy": Topic.CONSPIRACY_THEORY,
    "general medical advice": Topic.MEDICAL_ADVICE,
    "medical advice": Topic.MEDICAL_ADVICE,
    "prominent actors": Topic.PROMINENT_ACTORS,
    "prominent actor": Topic.PROMINENT_ACTORS,
    "community spread and impact": Topic.COMMUNITY_SPREAD,
    "community spread": Topic.COMMUNITY_SPREAD,
    "public authority action": Topic.PUBLIC_AUTHORITY_ACTION,
    "virus origin": Topic.VIRUS_ORIGIN,
    "public preparation": Topic.PUBLIC_PREPARATION,
    "other": Topic.OTHER,
}


def parse_topic(raw: str) -> Topic:
    """Map a topic string onto the closed taxonomy; raises ValueError."""
    key = " ".join(str(raw).strip().lower().replace("-", " ").replace("_", " ").split())
    if key in _TOPIC_ALIASES:
        return _TOPIC_ALIASES[key]
    raise ValueError(f"unknown topic: {raw!r}")


def parse_utc_timestamp(raw: str) -> datetime:
    """Parse an ISO-8601 timestamp; naive values are taken as UTC."""
    text = str(raw).strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        return dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def parse_utc_date(raw: str) -> date:
    return date.fromisoformat(str(raw).strip())


@dataclass(frozen=True)
class Tweet:
    id: str
    text: str
    author_id: str
    author_handle: str
    created_at: datetime
    kind: TweetKind
    urls: tuple[str, ...] = ()

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "author_id": self.author_id,
            "author_handle": self.author_handle,
            "created_at": self.created_at.isoformat(),
            "kind": self.kind.value,
            "urls": list(self.urls),
        }


@dataclass(frozen=True)
class Claim:
    id: str
    text: str
    debunk_date: date
    topic: Topic
    fact_checker: str = ""
    debunk_url: str = ""


@dataclass
class IngestReport:
    read: int = 0
    retained: int = 0
    rejected_by_kind: int = 0
    rejected_by_keyword: int = 0
    malformed: int = 0

    def to_dict(self) -> dict:
        return {
            "read": self.read,
            "retained": self.retained,
            "rejected_by_kind": self.rejected_by_kind,
            "rejected_by_keyword": self.rejected_by_keyword,
            "malformed": self.malformed,
        }


class Corpus:
    """Immutable-after-ingest container of retained SOURCE tweets.

    Keeps tweets in file order plus per-document token counts derived with
    the shared tokenizer, which the index and analytics layers reuse.
    """

    def __init__(self, tweets: dict[str, Tweet], report: IngestReport):
        self.tweets = tweets
        self.report = report
        self.doc_lengths = {tid: len(textnorm.tokenize(tw.text)) for tid, tw in tweets.items()}

    def __len__(self) -> int:
        return len(self.tweets)

    def __contains__(self, tweet_id: str) -> bool:
        return tweet_id in self.tweets

    def ids(self) -> list[str]:
        return list(self.tweets)

    def get(self, tweet_id: str) -> Tweet:
        return self.tweets[tweet_id]

    def text_of(self, tweet_id: str) -> str:
        return self.tweets[tweet_id].text

    @property
    def total_tokens(self) -> int:
        return sum(self.doc_lengths.values())

    def save(self, dest: str | Path) -> None:
        """Persist to a directory; output bytes depend only on corpus content."""
        dest = Path(dest)
        dest.mkdir(parents=True, exist_ok=True)
        with open(dest / "tweets.jsonl", "w", encoding="utf-8", newline="\n") as fh:
            for tw in self.tweets.values():
                fh.write(_dumps(tw.to_record()) + "\n")
        stats = {
            "document_count": len(self.tweets),
            "total_tokens": self.total_tokens,
            "report": self.report.to_dict(),
        }
        with open(dest / "stats.json", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_dumps(stats) + "\n")

    @classmethod
    def load(cls, src: str | Path) -> "Corpus":
        src = Path(src)
        tweets: dict[str, Tweet] = {}
        with open(src / "tweets.jsonl", encoding="utf-8") as fh:
            for line in fh:
                rec = json.loads(line)
                tw = _tweet_from_record(rec)
                tweets[tw.id] = tw
        report = IngestReport()
        stats_path = src / "stats.json"
        if stats_path.exists():
            saved = json.loads(stats_path.read_text(encoding="utf-8"))
            report = IngestReport(**saved.get("report", {}))
        return cls(tweets, report)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _tweet_from_record(rec: dict) -> Tweet:
    urls = tuple(textnorm.normalize_url(u) for u in rec.get("urls", []) if str(u).strip())
    return Tweet(
        id=str(rec["id"]),
        text=str(rec["text"]),
        author_id=str(rec.get("author_id", "")),
        author_handle=str(rec.get("author_handle", "")),
        created_at=parse_utc_timestamp(rec["created_at"]),
        kind=TweetKind(rec["kind"]),
        urls=urls,
    )


class _KeywordMatcher:
    """Case-insensitive substring match for bare keywords, exact match for
    ``#hashtag`` keywords against the tweet's extracted hashtags."""

    def __init__(self, keywords: Iterable[str]):
        self.hashtag_kw = set()
        self.text_kw = []
        for kw in keywords:
            k = textnorm.fold(kw.strip())
            if not k:
                continue
            if k.startswith("#"):
                self.hashtag_kw.add(k)
            else:
                self.text_kw.append(k)

    def matches(self, text: str) -> bool:
        folded = textnorm.fold(text)
        if any(kw in folded for kw in self.text_kw):
            return True
        if self.hashtag_kw and (self.hashtag_kw & textnorm.hashtags(text)):
            return True
        return False


def ingest_tweets(
    path: str | Path,
    keyword_filter: Sequence[str] | None = None,
    collection_window: tuple[date | None, date | None] | None = None,
) -> Corpus:
    """Read a tweets.jsonl file, keeping only well-formed SOURCE tweets.

    Counts every non-blank line as read; lines failing JSON parsing, schema
    validation, timestamp parsing, or the configured collection window are
    counted as malformed (with the line number logged). The report satisfies
    retained + rejected_by_kind + rejected_by_keyword + malformed = read.
    """
    path = Path(path)
    matcher = _KeywordMatcher(keyword_filter) if keyword_filter else None
    report = IngestReport()
    tweets: dict[str, Tweet] = {}
    win_start, win_end = collection_window if collection_window else (None, None)
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read tweet file {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            report.read += 1
            try:
                rec = json.loads(line)
                tw = _tweet_from_record(rec)
            except (ValueError, KeyError, TypeError) as exc:
                report.malformed += 1
                log.warning("malformed tweet at %s:%d: %s", path, lineno, exc)
                continue
            if tw.kind is TweetKind.SOURCE and not tw.text.strip():
                report.malformed += 1
                log.warning("empty SOURCE tweet text at %s:%d", path, lineno)
                continue
            created = tw.created_at.date()
            if (win_start and created < win_start) or (win_end and created > win_end):
                report.malformed += 1
                log.warning("tweet outside collection window at %s:%d", path, lineno)
                continue
            if tw.id in tweets:
                report.malformed += 1
                log.warning("duplicate tweet id %s at %s:%d", tw.id, path, lineno)
                continue
            if tw.kind is not TweetKind.SOURCE:
                report.rejected_by_kind += 1
                continue
            if matcher and not matcher.matches(tw.text):
                report.rejected_by_keyword += 1
                continue
            report.retained += 1
            tweets[tw.id] = tw
    return Corpus(tweets, report)


class InputError(Exception):
    """An input file is unreadable or structurally unusable."""


class DuplicateClaimIdError(InputError):
    def __init__(self, duplicates: Sequence[str]):
        self.duplicates = list(duplicates)
        super().__init__("duplicate claim ids: " + ", ".join(self.duplicates))


class ClaimSet:
    def __init__(self, claims: dict[str, Claim], report: dict):
        self.claims = claims
        self.report = report

    def __len__(self) -> int:
        return len(self.claims)

    def __iter__(self):
        return iter(self.claims.values())

    def get(self, claim_id: str) -> Claim:
        return self.claims[claim_id]


def _claim_from_record(rec: dict) -> Claim:
    for key in ("id", "text", "debunk_date", "topic"):
        if key not in rec or str(rec[key]).strip() == "":
            raise ValueError(f"missing field {key!r}")
    url = str(rec.get("debunk_url", "")).strip()
    if url and (" " in url or "." not in url):
        raise ValueError(f"malformed debunk_url {url!r}")
    return Claim(
        id=str(rec["id"]).strip(),
        text=str(rec["text"]),
        debunk_date=parse_utc_date(rec["debunk_date"]),
        topic=parse_topic(rec["topic"]),
        fact_checker=str(rec.get("fact_checker", "")).strip(),
        debunk_url=textnorm.normalize_url(url) if url else "",
    )


def ingest_claims(path: str | Path) -> ClaimSet:
    """Load claims from CSV or JSONL (by extension). Records with missing or
    unparseable fields are rejected and counted; duplicate ids are fatal."""
    path = Path(path)
    try:
        if path.suffix.lower() == ".csv":
            with open(path, encoding="utf-8", newline="") as fh:
                records = list(csv.DictReader(fh))
        else:
            with open(path, encoding="utf-8") as fh:
                records = [json.loads(line) for line in fh if line.strip()]
    except OSError as exc:
        raise InputError(f"cannot read claim file {path}: {exc}") from exc

    claims: dict[str, Claim] = {}
    duplicates = []
    report = {"read": len(records), "retained": 0, "rejected": 0}
    for rec in records:
        try:
            claim = _claim_from_record(rec)
        except (ValueError, KeyError, TypeError) as exc:
            report["rejected"] += 1
            log.warning("rejected claim record: %s", exc)
            continue
        if claim.id in claims:
            duplicates.append(claim.id)
            continue
        claims[claim.id] = claim
        report["retained"] += 1
    if duplicates:
        raise DuplicateClaimIdError(sorted(set(duplicates)))
    return ClaimSet(claims, report)


@dataclass
class LiveStatusSnapshot:
    entries: dict[str, LiveStatus]
    snapshot_date: date | None = None
    defaulted: int = 0
    skipped_unknown: int = 0

    def status_of(self, tweet_id: str) -> LiveStatus:
        return self.entries.get(tweet_id, LiveStatus.LIVE)


def ingest_status_snapshot(path: str | Path, corpus: Corpus) -> LiveStatusSnapshot:
    """One status per listed tweet; unlisted corpus tweets default to LIVE and
    are counted as defaulted; entries naming unknown tweets are skipped."""
    path = Path(path)
    entries: dict[str, LiveStatus] = {}
    snapshot_date: date | None = None
    skipped = 0
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read status snapshot {path}: {exc}") from exc
    with fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            if "snapshot_date" in rec and "tweet_id" not in rec:
                snapshot_date = parse_utc_date(rec["snapshot_date"])
                continue
            tid = str(rec["tweet_id"])
            if tid not in corpus:
                skipped += 1
                log.warning("status entry for unknown tweet %s skipped", tid)
                continue
            entries[tid] = LiveStatus(rec["status"])
    defaulted = len(corpus) - len(entries)
    return LiveStatusSnapshot(entries, snapshot_date, defaulted, skipped)


@dataclass(frozen=True)
class SpreadEvent:
    source_tweet_id: str
    kind: SpreadKind
    event_time: datetime


class SpreadEventLog:
    def __init__(self, groups: dict[str, list[SpreadEvent]], report: dict):
        self.groups = groups
        self.report = report

    def events_for(self, tweet_id: str) -> list[SpreadEvent]:
        return self.groups.get(tweet_id, [])

    @property
    def total_events(self) -> int:
        return sum(len(evs) for evs in self.groups.values())


def ingest_spread_events(path: str | Path, corpus: Corpus) -> SpreadEventLog:
    """Group events by source tweet, stably sorted by event time. Events for
    unknown tweets or timestamped before the source's creation are rejected."""
    path = Path(path)
    groups: dict[str, list[SpreadEvent]] = {}
    report = {"read": 0, "retained": 0, "rejected_unknown": 0, "rejected_before_creation": 0, "malformed": 0}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read spread events {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            report["read"] += 1
            try:
                rec = json.loads(line)
                ev = SpreadEvent(
                    source_tweet_id=str(rec["source_tweet_id"]),
                    kind=SpreadKind(rec["kind"]),
                    event_time=parse_utc_timestamp(rec["event_time"]),
                )
            except (ValueError, KeyError, TypeError) as exc:
                report["malformed"] += 1
                log.warning("malformed spread event at %s:%d: %s", path, lineno, exc)
                continue
            if ev.source_tweet_id not in corpus:
                report["rejected_unknown"] += 1
                continue
            if ev.event_time < corpus.get(ev.source_tweet_id).created_at:
                report["rejected_before_creation"] += 1
                continue
            groups.setdefault(ev.source_tweet_id, []).append(ev)
            report["retained"] += 1
    for evs in groups.values():
        evs.sort(key=lambda e: e.event_time)  # sort() is stable: ties keep input order
    return SpreadEventLog(groups, report)
