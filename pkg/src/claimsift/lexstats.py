"""Lexical group-difference statistics: BOW features and lexicon categories.

Feature selection keeps terms whose document frequency df satisfies
3 < df < 0.4 * t (both bounds strict, t = number of docs) and ranks them by
summed tf*idf with idf = ln(t/df), ties by term. Correlations against the
binary group label (misinformation = 1) use the point-biserial form of
Pearson's r, whose arithmetic flips sign bit-exactly when the label encoding
is swapped; a streaming cross-check lives in stats.py.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

from . import textnorm
from .corpus import InputError
from .stats import ZeroVarianceError, students_t_sf2

log = logging.getLogger(__name__)


@dataclass
class BowFeatureSet:
    terms: list[str]  # ranked by selection score, ties lexicographic
    df: dict[str, int]
    score: dict[str, float]  # summed tf*idf over the corpus
    t: int

    def __len__(self) -> int:
        return len(self.terms)

    def idf(self, term: str) -> float:
        return math.log(self.t / self.df[term])


def select_bow_features(
    docs: Sequence[str],
    min_df_exclusive: int = 3,
    max_df_ratio: float = 0.4,
    top_k: int = 5000,
) -> BowFeatureSet:
    t = len(docs)
    df: dict[str, int] = {}
    total_tf: dict[str, int] = {}
    for doc in docs:
        tokens = textnorm.tokenize(doc)
        for term in tokens:
            total_tf[term] = total_tf.get(term, 0) + 1
        for term in set(tokens):
            df[term] = df.get(term, 0) + 1
    kept = [
        term
        for term, n in df.items()
        if n > min_df_exclusive and n < max_df_ratio * t
    ]
    score = {term: total_tf[term] * math.log(t / df[term]) for term in kept}
    kept.sort(key=lambda term: (-score[term], term))
    selected = kept[:top_k]
    if not selected:
        log.warning("no term survived the df bounds (t=%d)", t)
    return BowFeatureSet(selected, {w: df[w] for w in selected}, {w: score[w] for w in selected}, t)


def tfidf_vector(doc: str, features: BowFeatureSet) -> dict[str, float]:
    """Sparse tf*idf over the selected features; absent terms are omitted."""
    counts: dict[str, int] = {}
    for term in textnorm.tokenize(doc):
        if term in features.df:
            counts[term] = counts.get(term, 0) + 1
    return {term: tf * features.idf(term) for term, tf in counts.items()}


@dataclass(frozen=True)
class LexiconCategory:
    name: str
    word_exact: frozenset[str]
    word_prefixes: tuple[str, ...]
    punct_patterns: tuple[str, ...]

    def matches_token(self, token: str) -> bool:
        return token in self.word_exact or any(token.startswith(p) for p in self.word_prefixes)


class Lexicon:
    def __init__(self, categories: list[LexiconCategory]):
        self.categories = categories

    def names(self) -> list[str]:
        return [c.name for c in self.categories]


def load_lexicon(path: str | Path | None = None) -> Lexicon:
    """Parse a %-delimited category dictionary.

    Layout: a '%' line, then one "id<TAB>name" line per category, a closing
    '%' line, then one "pattern<TAB>id[<TAB>id...]" line per pattern. A
    trailing '*' on a word pattern makes it a prefix match. Patterns with no
    word character are punctuation patterns, counted as raw substrings.
    """
    if path is None:
        lines = textnorm.read_lexicon_lines("demo_lexicon.dic")
    else:
        try:
            raw = Path(path).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise InputError(f"cannot read lexicon {path}: {exc}") from exc
        lines = [ln.rstrip("\n") for ln in raw if ln.strip()]
    if not lines or lines[0].strip() != "%":
        raise InputError("lexicon must open with a '%' header line")
    names: dict[str, str] = {}
    i = 1
    while i < len(lines) and lines[i].strip() != "%":
        parts = lines[i].split("\t")
        if len(parts) < 2:
            raise InputError(f"bad lexicon header line: {lines[i]!r}")
        names[parts[0].strip()] = parts[1].strip()
        i += 1
    if i >= len(lines):
        raise InputError("lexicon header never closed with '%'")
    exact: dict[str, set[str]] = {cid: set() for cid in names}
    prefixes: dict[str, list[str]] = {cid: [] for cid in names}
    puncts: dict[str, list[str]] = {cid: [] for cid in names}
    for line in lines[i + 1 :]:
        parts = [p for p in line.split("\t") if p.strip()]
        if len(parts) < 2:
            raise InputError(f"bad lexicon pattern line: {line!r}")
        pattern, cat_ids = parts[0], parts[1:]
        for cid in cat_ids:
            if cid not in names:
                raise InputError(f"pattern {pattern!r} names unknown category id {cid!r}")
        if textnorm.WORD_RE.search(pattern):
            folded = textnorm.fold(pattern)
            if folded.endswith("*"):
                for cid in cat_ids:
                    prefixes[cid].append(folded[:-1])
            else:
                for cid in cat_ids:
                    exact[cid].add(folded)
        else:
            for cid in cat_ids:
                puncts[cid].append(pattern)
    categories = [
        LexiconCategory(
            name=names[cid],
            word_exact=frozenset(exact[cid]),
            word_prefixes=tuple(prefixes[cid]),
            punct_patterns=tuple(puncts[cid]),
        )
        for cid in names
    ]
    return Lexicon(categories)


def lexicon_frequencies(doc: str, lexicon: Lexicon) -> dict[str, float]:
    """Per-category matched count over total word-token count; punctuation
    patterns are counted on the noise-stripped raw text. Empty docs give
    all-zero frequencies (flagged via a warning)."""
    tokens = textnorm.tokenize(doc)
    total = len(tokens)
    if total == 0:
        log.warning("empty document in lexicon profiling")
        return {c.name: 0.0 for c in lexicon.categories}
    stripped = textnorm.strip_noise(doc)
    out: dict[str, float] = {}
    for cat in lexicon.categories:
        count = sum(1 for tok in tokens if cat.matches_token(tok))
        count += sum(stripped.count(p) for p in cat.punct_patterns)
        out[cat.name] = count / total
    return out


class Group(str, Enum):
    MISINFORMATION = "MISINFORMATION"
    NON_MISINFORMATION = "NON_MISINFORMATION"


@dataclass(frozen=True)
class FeatureCorrelation:
    feature: str
    r: float
    p: float
    group: Group

    def to_record(self) -> dict:
        return {"feature": self.feature, "r": self.r, "p": self.p, "group": self.group.value}


def point_biserial(x: Sequence[float], y: Sequence[int]) -> tuple[float, float]:
    """Pearson r between a real series and binary labels, plus two-sided p.

    Closed form r = (m1 - m0) * sqrt(n1*n0/n) / sqrt(ss_x). Computed so the
    only label-dependent term is the mean difference, which negates exactly
    under label swap; everything else is label-symmetric.
    """
    n = len(x)
    if n != len(y):
        raise ValueError(f"length mismatch: {n} vs {len(y)}")
    if n < 3:
        raise ValueError(f"need at least 3 pairs, got {n}")
    sum1 = sum0 = 0.0
    n1 = n0 = 0
    for xi, yi in zip(x, y):
        if yi:
            sum1 += xi
            n1 += 1
        else:
            sum0 += xi
            n0 += 1
    if n1 == 0 or n0 == 0:
        raise ZeroVarianceError("labels are constant")
    mean = (sum1 + sum0) / n
    ss_x = 0.0
    for xi in x:
        d = xi - mean
        ss_x += d * d
    if ss_x == 0.0:
        raise ZeroVarianceError("feature series is constant")
    r = ((sum1 / n1) - (sum0 / n0)) * math.sqrt(n1 * n0 / n) / math.sqrt(ss_x)
    r = max(-1.0, min(1.0, r))
    denom = 1.0 - r * r
    p = 0.0 if denom <= 0.0 else students_t_sf2(r * math.sqrt((n - 2) / denom), n - 2)
    return r, p


def top_correlated(
    matrix: Mapping[str, Sequence[float]],
    labels: Sequence[int],
    alpha: float = 0.05,
    k: int = 10,
) -> tuple[list[FeatureCorrelation], list[FeatureCorrelation], dict]:
    """Two ranked lists: positive-r features (misinformation side, descending
    r) and negative-r features (other side, descending |r|); p < alpha only.
    Zero-variance features are skipped and counted; r == 0 joins neither list.
    """
    mis: list[FeatureCorrelation] = []
    non: list[FeatureCorrelation] = []
    report = {"tested": 0, "skipped_zero_variance": 0, "significant": 0}
    for feature in sorted(matrix):
        report["tested"] += 1
        try:
            r, p = point_biserial(matrix[feature], labels)
        except ZeroVarianceError:
            report["skipped_zero_variance"] += 1
            continue
        if not p < alpha:
            continue
        report["significant"] += 1
        if r > 0:
            mis.append(FeatureCorrelation(feature, r, p, Group.MISINFORMATION))
        elif r < 0:
            non.append(FeatureCorrelation(feature, r, p, Group.NON_MISINFORMATION))
    mis.sort(key=lambda fc: (-fc.r, fc.feature))
    non.sort(key=lambda fc: (fc.r, fc.feature))
    return mis[:k], non[:k], report


def build_feature_matrix(
    docs: Sequence[str], features: BowFeatureSet
) -> dict[str, list[float]]:
    """Dense per-feature tf*idf series across docs (for correlation)."""
    matrix: dict[str, list[float]] = {term: [0.0] * len(docs) for term in features.terms}
    for i, doc in enumerate(docs):
        for term, value in tfidf_vector(doc, features).items():
            matrix[term][i] = value
    return matrix


def build_lexicon_matrix(docs: Sequence[str], lexicon: Lexicon) -> dict[str, list[float]]:
    """Dense per-category normalized-frequency series across docs."""
    matrix: dict[str, list[float]] = {name: [0.0] * len(docs) for name in lexicon.names()}
    for i, doc in enumerate(docs):
        for name, freq in lexicon_frequencies(doc, lexicon).items():
            matrix[name][i] = freq
    return matrix
