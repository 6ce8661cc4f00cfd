"""Character-trigram hashing embedder and cosine reranking.

The default embedder is deliberately cheap and fully deterministic: fold the
text, pad with a single space on each side, hash every character trigram with
crc32 into one of 512 buckets, and L2-normalize the bucket counts. Empty text
maps to the zero vector. Any model exposing ``embed(text) -> ndarray`` and a
matching ``dim`` can be slotted in instead (see the HTTP client in scorer.py).
"""
from __future__ import annotations

import zlib
from typing import Mapping, Protocol, Sequence

import numpy as np

from . import textnorm

DIM = 512


class Embedder(Protocol):
    dim: int

    def embed(self, text: str) -> np.ndarray: ...


class TrigramHashEmbedder:
    """512-dim hashed trigram profile of the folded text, unit normalized."""

    def __init__(self, dim: int = DIM):
        if dim <= 0:
            raise ValueError(f"dim must be positive, got {dim}")
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        folded = textnorm.fold(text)
        if not folded:
            return vec
        padded = " " + folded + " "
        for i in range(len(padded) - 2):
            gram = padded[i : i + 3]
            vec[zlib.crc32(gram.encode("utf-8")) % self.dim] += 1.0
        norm = float(np.linalg.norm(vec))
        if norm > 0.0:
            vec /= norm
        return vec

    def embed_many(self, texts: Sequence[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        for i, text in enumerate(texts):
            out[i] = self.embed(text)
        return out


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; 0.0 whenever either vector is all zeros."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


class CachedEmbedder:
    """Memoizing wrapper so a tweet embedded for one claim is reused for all."""

    def __init__(self, base: Embedder):
        self.base = base
        self.dim = base.dim
        self._memo: dict[str, np.ndarray] = {}

    def embed(self, text: str) -> np.ndarray:
        vec = self._memo.get(text)
        if vec is None:
            vec = self.base.embed(text)
            self._memo[text] = vec
        return vec


class UnusableQueryText(ValueError):
    """Query text embedded to the zero vector; rerank is meaningless."""


def rerank(
    query_text: str,
    candidate_texts: Mapping[str, str],
    k: int,
    embedder: Embedder | None = None,
) -> list[tuple[str, float]]:
    """Top-k candidates by cosine to the query, ties by ascending id."""
    if k <= 0 or not candidate_texts:
        return []
    emb = embedder if embedder is not None else TrigramHashEmbedder()
    qv = emb.embed(query_text)
    if not np.any(qv):
        raise UnusableQueryText(f"query embeds to the zero vector: {query_text[:80]!r}")
    scored = [(cid, cosine(qv, emb.embed(text))) for cid, text in candidate_texts.items()]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored[:k]
