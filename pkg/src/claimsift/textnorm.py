"""Shared text normalization used by every stage of the pipeline.

All token-level matching in the package (indexing, overlap scoring,
subject/object extraction, lexicon counting) goes through the same
tokenizer so that results are comparable across stages.
"""
from __future__ import annotations

import re
import unicodedata
from functools import lru_cache
from importlib import resources

URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
MENTION_RE = re.compile(r"@\w+")
WORD_RE = re.compile(r"\w+")
HASHTAG_RE = re.compile(r"#(\w+)")


def fold(text: str) -> str:
    """Casefold and strip diacritics so matching is case- and accent-blind.

    Decomposes before and after casefolding: compatibility decomposition can
    surface new cased letters (math alphabets), and casefolding can surface
    new decomposable ones, so a single pass in either order is not stable.
    """
    decomposed = unicodedata.normalize("NFKD", text)
    refolded = unicodedata.normalize("NFKD", decomposed.casefold())
    return "".join(ch for ch in refolded if not unicodedata.combining(ch))


def strip_noise(text: str) -> str:
    """Remove URLs and @-mentions; hashtag bodies survive tokenization."""
    return MENTION_RE.sub(" ", URL_RE.sub(" ", text))


def tokenize(text: str) -> list[str]:
    """Folded word tokens of a post. URLs and @-mentions are dropped,
    hashtag bodies are kept (the ``#`` itself is not a word character)."""
    return WORD_RE.findall(fold(strip_noise(text)))


def hashtags(text: str) -> set[str]:
    """Folded hashtags of a post, each including the leading ``#``."""
    return {"#" + body for body in HASHTAG_RE.findall(fold(text))}


def _data_text(name: str) -> str:
    return resources.files("claimsift.data").joinpath(name).read_text(encoding="utf-8")


def read_lexicon_lines(name: str, comment: str | None = None) -> list[str]:
    """Non-empty lines of a bundled data file, optionally dropping comments."""
    lines = []
    for raw in _data_text(name).splitlines():
        line = raw.strip()
        if not line:
            continue
        if comment and line.startswith(comment):
            continue
        lines.append(line)
    return lines


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    return frozenset(read_lexicon_lines("stopwords.txt"))


def content_tokens(text: str) -> list[str]:
    """Tokens with stopwords removed; the vocabulary used for overlap tests."""
    sw = stopwords()
    return [t for t in tokenize(text) if t not in sw]


def content_token_set(text: str) -> frozenset[str]:
    return frozenset(content_tokens(text))


def jaccard(a: frozenset[str] | set[str], b: frozenset[str] | set[str]) -> float:
    """Jaccard overlap of two token sets; 0.0 when the union is empty."""
    if not a and not b:
        return 0.0
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def default_keywords() -> list[str]:
    """The bundled collection keyword list (hashtags as published)."""
    return read_lexicon_lines("keywords.txt")


def normalize_url(url: str) -> str:
    """Canonical URL form for membership tests: fragment dropped, scheme and
    leading ``www.`` stripped, lowercased, trailing slash removed. The query
    string is kept because fact-check URLs identify debunks through it."""
    u = url.strip().split("#", 1)[0].lower()
    for prefix in ("https://", "http://"):
        if u.startswith(prefix):
            u = u[len(prefix):]
            break
    if u.startswith("www."):
        u = u[4:]
    return u.rstrip("/")
