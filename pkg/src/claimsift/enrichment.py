"""Weak-label training set construction from four sources.

Collection-derived rules, applied to scored (claim, tweet) candidates with
confidence >= 0.7 and label MISINFORMATION or DEBUNK:

  (b) MISINFORMATION candidate whose tweet is gone from the platform
      (TWEET_DELETED / ACCOUNT_SUSPENDED / ACCOUNT_DELETED) -> MISINFORMATION
  (c) DEBUNK candidate carrying a URL from the debunk-URL list -> DEBUNK
  (d) MISINFORMATION candidate authored by a listed credible account
      -> IRRELEVANT

(c) is disjoint from (b)/(d) by the label gate; when a candidate matches
both (b) and (d), credibility wins and (d) fires. Candidates matching no
rule are dropped and counted. The other three sources are format adapters:
pre-annotated seed pairs, a stance-dataset import, and fact-check articles
(explanations become DEBUNK samples, quoted claim spans become
MISINFORMATION samples).
"""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from . import svo, textnorm
from .corpus import ClaimSet, Corpus, InputError, LiveStatus, LiveStatusSnapshot
from .pipeline import ClaimRun
from .scorer import Label

log = logging.getLogger(__name__)

REMOVED_STATUSES = frozenset(
    {LiveStatus.TWEET_DELETED, LiveStatus.ACCOUNT_SUSPENDED, LiveStatus.ACCOUNT_DELETED}
)


class SampleSource(str, Enum):
    SEED_ANNOTATED = "SEED_ANNOTATED"
    COVIDLIES = "COVIDLIES"
    TWEET_COLLECT = "TWEET_COLLECT"
    IFCN = "IFCN"


@dataclass(frozen=True)
class TrainingSample:
    claim_text: str
    sample_text: str
    label: Label
    source: SampleSource
    provenance_id: str
    rule: str  # which selection rule fired ("b"/"c"/"d" or an adapter tag)

    def to_record(self) -> dict:
        return {
            "claim": self.claim_text,
            "text": self.sample_text,
            "label": self.label.value,
            "source": self.source.value,
            "provenance_id": self.provenance_id,
            "rule": self.rule,
        }


@dataclass(frozen=True)
class DebunkArticle:
    debunk_url: str
    explanation_text: str
    full_article_text: str
    claim_text: str


def load_debunk_urls(path: str | Path) -> frozenset[str]:
    """One URL per line, '#' comments allowed; stored normalized."""
    urls = set()
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read debunk URL list {path}: {exc}") from exc
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            urls.add(textnorm.normalize_url(line))
    return frozenset(urls)


def load_credible_accounts(path: str | Path | None = None) -> frozenset[str]:
    """Folded handles (leading @ stripped); None loads the bundled list."""
    if path is None:
        lines = textnorm.read_lexicon_lines("credible_accounts.txt", comment="#")
    else:
        try:
            raw = Path(path).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise InputError(f"cannot read credible account list {path}: {exc}") from exc
        lines = [ln.strip() for ln in raw if ln.strip() and not ln.strip().startswith("#")]
    handles = set()
    for line in lines:
        handle = line.split("\t")[0].strip()
        if handle:
            handles.add(textnorm.fold(handle.lstrip("@")))
    return frozenset(handles)


def enrich_from_collection(
    corpus: Corpus,
    claims: ClaimSet,
    claim_runs: Sequence[ClaimRun],
    snapshot: LiveStatusSnapshot,
    debunk_urls: frozenset[str],
    credible_accounts: frozenset[str],
    conf_threshold: float = 0.7,
) -> tuple[list[TrainingSample], dict]:
    """Apply rules (b)/(c)/(d) to the scored predictions of a pipeline run.

    claim_runs carry the stage-4 predictions (pre post-filter); reusing them
    means extraction and enrichment share one scoring pass.
    """
    samples: list[TrainingSample] = []
    report = {"scored": 0, "candidates": 0, "rule_b": 0, "rule_c": 0, "rule_d": 0, "dropped": 0}
    for run in sorted(claim_runs, key=lambda r: r.claim_id):
        claim = claims.get(run.claim_id)
        for pred in run.predictions or []:
            report["scored"] += 1
            if pred.label not in (Label.MISINFORMATION, Label.DEBUNK):
                continue
            if pred.confidence < conf_threshold:
                continue
            report["candidates"] += 1
            tweet = corpus.get(pred.tweet_id)
            provenance = f"{pred.claim_id}:{pred.tweet_id}"
            rule = None
            label = None
            if pred.label is Label.MISINFORMATION:
                credible = textnorm.fold(tweet.author_handle.lstrip("@")) in credible_accounts
                removed = snapshot.status_of(tweet.id) in REMOVED_STATUSES
                if credible:  # (d) overrides (b) on collision
                    rule, label = "d", Label.IRRELEVANT
                elif removed:
                    rule, label = "b", Label.MISINFORMATION
            else:
                if any(u in debunk_urls for u in tweet.urls):
                    rule, label = "c", Label.DEBUNK
            if rule is None:
                report["dropped"] += 1
                continue
            report[f"rule_{rule}"] += 1
            samples.append(
                TrainingSample(claim.text, tweet.text, label, SampleSource.TWEET_COLLECT, provenance, rule)
            )
    return samples, report


QUOTE_RE = re.compile(r"\"([^\"]+)\"|“([^”]+)”")
CLAIM_CUE_RE = re.compile(r"\bclaim")


def extract_quoted_claims(article_text: str) -> list[str]:
    """Quoted spans of >= 5 tokens inside claim-bearing paragraphs.

    A paragraph (blank-line separated) is claim-bearing when its folded text
    contains a token starting with "claim". Straight and curly double quotes
    both delimit spans; spans are returned in document order.
    """
    spans: list[str] = []
    for para in re.split(r"\n\s*\n", article_text):
        if not CLAIM_CUE_RE.search(textnorm.fold(para)):
            continue
        for match in QUOTE_RE.finditer(para):
            span = (match.group(1) or match.group(2) or "").strip()
            if len(textnorm.WORD_RE.findall(textnorm.fold(span))) >= 5:
                spans.append(span)
    return spans


def enrich_from_ifcn(articles: Sequence[DebunkArticle]) -> list[TrainingSample]:
    """One DEBUNK sample per explanation, one MISINFORMATION sample per
    extracted quoted claim span."""
    samples: list[TrainingSample] = []
    for i, article in enumerate(articles):
        if not article.explanation_text.strip():
            raise ValueError(f"article {i} ({article.debunk_url}) has an empty explanation")
        samples.append(
            TrainingSample(
                article.claim_text,
                article.explanation_text,
                Label.DEBUNK,
                SampleSource.IFCN,
                f"{article.debunk_url}#explanation",
                "ifcn_explanation",
            )
        )
        for j, span in enumerate(extract_quoted_claims(article.full_article_text)):
            samples.append(
                TrainingSample(
                    article.claim_text,
                    span,
                    Label.MISINFORMATION,
                    SampleSource.IFCN,
                    f"{article.debunk_url}#quote{j}",
                    "ifcn_quote",
                )
            )
    return samples


def load_ifcn_articles(path: str | Path) -> list[DebunkArticle]:
    articles = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read article file {path}: {exc}") from exc
    with fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            articles.append(
                DebunkArticle(
                    debunk_url=textnorm.normalize_url(str(rec["debunk_url"])),
                    explanation_text=str(rec["explanation"]),
                    full_article_text=str(rec.get("article", "")),
                    claim_text=str(rec["claim"]),
                )
            )
    return articles


COVIDLIES_LABEL_MAP = {"pos": Label.MISINFORMATION, "neg": Label.DEBUNK, "na": Label.IRRELEVANT}


def load_covidlies(path: str | Path, label_map: dict[str, Label] | None = None) -> list[TrainingSample]:
    """Stance-dataset adapter: {misconception, tweet, label} records with
    stance labels pos/neg/na mapped onto the closed label set. The adapter
    emits exactly what the input contains; it does not subsample."""
    mapping = label_map if label_map is not None else COVIDLIES_LABEL_MAP
    samples = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read stance dataset {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            rec = json.loads(line)
            stance = str(rec["label"]).strip().lower()
            if stance not in mapping:
                log.warning("unknown stance label %r at line %d skipped", stance, lineno)
                continue
            samples.append(
                TrainingSample(
                    str(rec["misconception"]),
                    str(rec["tweet"]),
                    mapping[stance],
                    SampleSource.COVIDLIES,
                    str(rec.get("id", lineno)),
                    "import",
                )
            )
    return samples


def load_seed_annotated(path: str | Path) -> list[TrainingSample]:
    """Pre-annotated {claim, text, label} pairs, labels already closed-set."""
    samples = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read annotated pairs {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            rec = json.loads(line)
            samples.append(
                TrainingSample(
                    str(rec["claim"]),
                    str(rec["text"]),
                    Label(rec["label"]),
                    SampleSource.SEED_ANNOTATED,
                    str(rec.get("id", lineno)),
                    "import",
                )
            )
    return samples


def clean_pairs(samples: Sequence[TrainingSample]) -> tuple[list[TrainingSample], list[TrainingSample]]:
    """Partition samples: discarded iff the sample text mentions neither the
    claim's subject nor its object terms. Sample text is never altered."""
    kept: list[TrainingSample] = []
    discarded: list[TrainingSample] = []
    terms_cache: dict[str, svo.SvoTerms] = {}
    for sample in samples:
        terms = terms_cache.get(sample.claim_text)
        if terms is None:
            terms = svo.extract_svo(sample.claim_text)
            terms_cache[sample.claim_text] = terms
        if svo.mentions_neither(terms, sample.sample_text):
            discarded.append(sample)
        else:
            kept.append(sample)
    return kept, discarded


def dataset_report(samples: Iterable[TrainingSample]) -> dict:
    """Per-source x per-label count table with row, column, and grand totals."""
    by_source = {
        src.value: {label.value: 0 for label in Label} for src in SampleSource
    }
    for sample in samples:
        by_source[sample.source.value][sample.label.value] += 1
    by_label = {
        label.value: sum(by_source[src.value][label.value] for src in SampleSource)
        for label in Label
    }
    source_totals = {src: sum(counts.values()) for src, counts in by_source.items()}
    return {
        "by_source": by_source,
        "source_totals": source_totals,
        "label_totals": by_label,
        "total": sum(by_label.values()),
    }
