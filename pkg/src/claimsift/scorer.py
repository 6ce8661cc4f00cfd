"""Pairwise (claim, tweet) scoring: label plus confidence.

Two interchangeable scorer families implement ``score(claim_text, text)``:

  BaselineLexicalScorer   deterministic in-process heuristic, used by the
                          hermetic test suite and as the default binding
  RemoteScorer            JSON-over-HTTP client for an external sequence-pair
                          classifier (request {"claim","text"} or a batch
                          list; response {"label","confidence"})

Baseline decision rule, in order:
  1. any debunk cue from the bundled cue lexicon present -> DEBUNK with
     confidence min(1, 0.6 + 0.2 * distinct_cue_hits)
  2. content-token Jaccard overlap j with the claim >= tau_match (default
     0.5) -> MISINFORMATION with confidence j
  3. otherwise -> IRRELEVANT with confidence 1 - j
Confidence is therefore a monotone function of the signal that decided the
label, and always lies in [0, 1].
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Protocol, Sequence

import numpy as np
import requests

from . import textnorm

log = logging.getLogger(__name__)


class Label(str, Enum):
    MISINFORMATION = "MISINFORMATION"
    DEBUNK = "DEBUNK"
    IRRELEVANT = "IRRELEVANT"


LABEL_NAMES = frozenset(label.value for label in Label)


class ScorerKind(str, Enum):
    BASELINE_LEXICAL = "BASELINE_LEXICAL"
    EXTERNAL = "EXTERNAL"


class PairScorer(Protocol):
    def score(self, claim_text: str, text: str) -> tuple[Label, float]: ...

    def score_batch(
        self, pairs: Sequence[tuple[str, str]]
    ) -> list[tuple[Label, float]]: ...


class ExternalScorerError(Exception):
    """External scorer unreachable, misbehaving, or violating the protocol."""


@lru_cache(maxsize=1)
def debunk_cues() -> tuple[str, ...]:
    return tuple(textnorm.fold(c) for c in textnorm.read_lexicon_lines("debunk_cues.txt"))


def count_debunk_cues(text: str) -> int:
    """Distinct cue hits: single-word cues match whole tokens, cues with a
    space or hyphen match as substrings of the folded noise-stripped text."""
    folded = textnorm.fold(textnorm.strip_noise(text))
    tokens = set(textnorm.WORD_RE.findall(folded))
    hits = 0
    for cue in debunk_cues():
        if " " in cue or "-" in cue:
            hits += cue in folded
        else:
            hits += cue in tokens
    return hits


class BaselineLexicalScorer:
    kind = ScorerKind.BASELINE_LEXICAL

    def __init__(self, tau_match: float = 0.5):
        if not 0.0 < tau_match <= 1.0:
            raise ValueError(f"tau_match must be in (0, 1], got {tau_match}")
        self.tau_match = tau_match

    def score(self, claim_text: str, text: str) -> tuple[Label, float]:
        hits = count_debunk_cues(text)
        if hits > 0:
            return Label.DEBUNK, min(1.0, 0.6 + 0.2 * hits)
        j = textnorm.jaccard(
            textnorm.content_token_set(claim_text), textnorm.content_token_set(text)
        )
        if j >= self.tau_match:
            return Label.MISINFORMATION, j
        return Label.IRRELEVANT, 1.0 - j

    def score_batch(self, pairs: Sequence[tuple[str, str]]) -> list[tuple[Label, float]]:
        return [self.score(claim, text) for claim, text in pairs]


def score_pair(scorer: PairScorer, claim_text: str, tweet_text: str) -> tuple[Label, float]:
    """Score one pair; both texts must be non-empty."""
    if not claim_text.strip() or not tweet_text.strip():
        raise ValueError("score_pair requires non-empty claim and tweet text")
    return scorer.score(claim_text, tweet_text)


def _validate_score_payload(payload) -> tuple[Label, float]:
    try:
        label = Label(payload["label"])
        conf = float(payload["confidence"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ExternalScorerError(f"malformed scorer response: {payload!r}") from exc
    if not 0.0 <= conf <= 1.0:
        raise ExternalScorerError(f"confidence out of range: {conf}")
    return label, conf


class _RetryingHttpClient:
    """POST with bounded retries on connection errors and 5xx responses."""

    def __init__(self, endpoint: str, timeout: float, retries: int, backoff: float, session=None):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.retries = max(1, int(retries))
        self.backoff = backoff
        self.session = session if session is not None else requests.Session()

    def post_json(self, path: str, payload):
        url = self.endpoint + path
        last_error = None
        for attempt in range(self.retries):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                resp = self.session.post(url, json=payload, timeout=self.timeout)
            except requests.RequestException as exc:
                last_error = exc
                log.warning("request to %s failed (attempt %d): %s", url, attempt + 1, exc)
                continue
            if resp.status_code >= 500:
                last_error = ExternalScorerError(f"{url} returned {resp.status_code}")
                log.warning("server error from %s (attempt %d)", url, attempt + 1)
                continue
            if resp.status_code >= 400:
                raise ExternalScorerError(
                    f"{url} rejected request ({resp.status_code}): {resp.text[:200]}"
                )
            try:
                return resp.json()
            except ValueError as exc:
                raise ExternalScorerError(f"non-JSON response from {url}") from exc
        raise ExternalScorerError(
            f"{url} unreachable after {self.retries} attempts: {last_error}"
        )


class RemoteScorer:
    kind = ScorerKind.EXTERNAL

    def __init__(
        self,
        endpoint: str,
        timeout: float = 30.0,
        retries: int = 3,
        backoff: float = 0.5,
        batch_size: int = 32,
        session=None,
    ):
        self._client = _RetryingHttpClient(endpoint, timeout, retries, backoff, session)
        self.batch_size = max(1, int(batch_size))

    def score(self, claim_text: str, text: str) -> tuple[Label, float]:
        payload = self._client.post_json("/score", {"claim": claim_text, "text": text})
        return _validate_score_payload(payload)

    def score_batch(self, pairs: Sequence[tuple[str, str]]) -> list[tuple[Label, float]]:
        out: list[tuple[Label, float]] = []
        for start in range(0, len(pairs), self.batch_size):
            chunk = pairs[start : start + self.batch_size]
            payload = [{"claim": c, "text": t} for c, t in chunk]
            result = self._client.post_json("/score", payload)
            if not isinstance(result, list) or len(result) != len(chunk):
                raise ExternalScorerError(
                    f"batch response size {len(result) if isinstance(result, list) else 'non-list'}"
                    f" != request size {len(chunk)}"
                )
            out.extend(_validate_score_payload(item) for item in result)
        return out


class RemoteEmbedder:
    """Client for the sidecar /embed endpoint: {"text"} -> {"vector": [...]}."""

    def __init__(
        self,
        endpoint: str,
        dim: int = 512,
        timeout: float = 30.0,
        retries: int = 3,
        backoff: float = 0.5,
        session=None,
    ):
        self._client = _RetryingHttpClient(endpoint, timeout, retries, backoff, session)
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        payload = self._client.post_json("/embed", {"text": text})
        try:
            vec = np.asarray(payload["vector"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise ExternalScorerError(f"malformed embed response: {payload!r}") from exc
        if vec.shape != (self.dim,):
            raise ExternalScorerError(f"embed dimension {vec.shape} != ({self.dim},)")
        return vec


class RemoteSvoExtractor:
    """Client for an optional external extractor: {"text"} -> {"subjects","objects"}."""

    def __init__(self, endpoint: str, timeout: float = 30.0, retries: int = 3, session=None):
        self._client = _RetryingHttpClient(endpoint, timeout, retries, 0.5, session)

    def extract(self, text: str):
        from .svo import SvoTerms

        payload = self._client.post_json("/svo", {"text": text})
        try:
            return SvoTerms(
                frozenset(str(s) for s in payload["subjects"]),
                frozenset(str(o) for o in payload["objects"]),
            )
        except (KeyError, TypeError) as exc:
            raise ExternalScorerError(f"malformed SVO response: {payload!r}") from exc


@dataclass(frozen=True)
class ScorerBinding:
    """Immutable description of which scorer a run uses."""

    kind: ScorerKind = ScorerKind.BASELINE_LEXICAL
    endpoint: str | None = None
    timeout: float = 30.0
    retries: int = 3
    batch_size: int = 32
    tau_match: float = 0.5

    def resolve(self, session=None) -> PairScorer:
        if self.kind is ScorerKind.BASELINE_LEXICAL:
            return BaselineLexicalScorer(tau_match=self.tau_match)
        if not self.endpoint:
            raise ValueError("EXTERNAL scorer binding requires an endpoint")
        return RemoteScorer(
            self.endpoint,
            timeout=self.timeout,
            retries=self.retries,
            batch_size=self.batch_size,
            session=session,
        )
