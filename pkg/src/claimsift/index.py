"""Inverted index with Okapi BM25 retrieval.

Scoring uses k1 = 1.2, b = 0.75 and the smoothed idf
ln((N - df + 0.5) / (df + 0.5) + 1), which is nonnegative for all df <= N.
Query terms are deduplicated in first-occurrence order and contributions are
accumulated per document in that term order, so scores are reproducible
bit-for-bit across runs and across save/load round trips.
"""
from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Mapping

from . import textnorm
from .corpus import Corpus, InputError

log = logging.getLogger(__name__)

FORMAT_VERSION = 2


class IndexFormatError(InputError):
    """Persisted index layout is missing, corrupt, or the wrong version."""


def _write_json(path: Path, obj: object) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n")


def query_terms(query: str) -> list[str]:
    """Unique query tokens in order of first occurrence."""
    return list(dict.fromkeys(textnorm.tokenize(query)))


class InvertedIndex:
    K1 = 1.2
    B = 0.75

    def __init__(self, postings: dict[str, list[tuple[str, int]]], doc_lengths: dict[str, int]):
        self.postings = postings
        self.doc_lengths = doc_lengths
        self.n_docs = len(doc_lengths)
        total = sum(doc_lengths.values())
        self.avgdl = total / self.n_docs if self.n_docs else 0.0

    @classmethod
    def build(cls, corpus: Corpus) -> "InvertedIndex":
        if len(corpus) == 0:
            raise InputError("cannot index an empty corpus")
        return cls.from_texts({tid: corpus.text_of(tid) for tid in corpus.ids()})

    @classmethod
    def from_texts(cls, docs: Mapping[str, str]) -> "InvertedIndex":
        postings: dict[str, list[tuple[str, int]]] = {}
        doc_lengths: dict[str, int] = {}
        for doc_id, text in docs.items():
            tokens = textnorm.tokenize(text)
            doc_lengths[doc_id] = len(tokens)
            counts: dict[str, int] = {}
            for tok in tokens:
                counts[tok] = counts.get(tok, 0) + 1
            for term, tf in counts.items():
                postings.setdefault(term, []).append((doc_id, tf))
        for plist in postings.values():
            plist.sort()
        return cls(postings, doc_lengths)

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        return math.log((self.n_docs - df + 0.5) / (df + 0.5) + 1.0)

    def scores(self, query: str) -> dict[str, float]:
        """BM25 score for every document sharing at least one query term."""
        acc: dict[str, float] = {}
        k1, b, avgdl = self.K1, self.B, self.avgdl
        for term in query_terms(query):
            plist = self.postings.get(term)
            if not plist:
                continue
            idf = self.idf(term)
            for doc_id, tf in plist:
                dl = self.doc_lengths[doc_id]
                contrib = idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * dl / avgdl))
                acc[doc_id] = acc.get(doc_id, 0.0) + contrib
        return acc

    def search(self, query: str, k: int) -> list[tuple[str, float]]:
        """Top-k documents by BM25, ties broken by ascending document id."""
        if k <= 0:
            return []
        if not query_terms(query):
            log.warning("query tokenized to zero terms: %r", query[:80])
            return []
        scored = self.scores(query)
        ranked = sorted(scored.items(), key=lambda item: (-item[1], item[0]))
        return ranked[:k]

    def save(self, dest: str | Path) -> None:
        dest = Path(dest)
        dest.mkdir(parents=True, exist_ok=True)
        meta = {
            "format_version": FORMAT_VERSION,
            "document_count": self.n_docs,
            "term_count": len(self.postings),
            "total_tokens": sum(self.doc_lengths.values()),
        }
        _write_json(dest / "meta.json", meta)
        _write_json(dest / "doc_lengths.json", dict(sorted(self.doc_lengths.items())))
        with open(dest / "postings.jsonl", "w", encoding="utf-8", newline="\n") as fh:
            for term in sorted(self.postings):
                plist = sorted(self.postings[term])
                rec = {"term": term, "postings": [[d, tf] for d, tf in plist]}
                fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n")

    @classmethod
    def load(cls, src: str | Path) -> "InvertedIndex":
        src = Path(src)
        meta_path = src / "meta.json"
        if not meta_path.exists():
            raise IndexFormatError(f"no index at {src}")
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        version = meta.get("format_version")
        if version != FORMAT_VERSION:
            raise IndexFormatError(
                f"index format version {version} at {src}, expected {FORMAT_VERSION}"
            )
        doc_lengths = {
            str(k): int(v)
            for k, v in json.loads((src / "doc_lengths.json").read_text(encoding="utf-8")).items()
        }
        postings: dict[str, list[tuple[str, int]]] = {}
        with open(src / "postings.jsonl", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                postings[rec["term"]] = [(str(d), int(tf)) for d, tf in rec["postings"]]
        index = cls(postings, doc_lengths)
        if index.n_docs != meta.get("document_count"):
            raise IndexFormatError(f"document count mismatch in {src}")
        return index
