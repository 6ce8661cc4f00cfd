"""Heuristic subject/object term extraction and the overlap predicates.

This approximates a full SVO parse with a rule that needs no model: fold the
text, split it into clauses at sentence punctuation, and inside each clause
let the first finite-verb cue from the bundled lexicon partition the content
tokens into a subject side (before the cue) and an object side (after it).
Texts where no clause contains a cue fall back to treating every content
token as a subject and are flagged low-confidence.

An external extractor can be swapped in over HTTP: request {"text": ...},
response {"subjects": [...], "objects": [...]}.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from . import textnorm

CLAUSE_RE = re.compile(r"[.;!?]+")


@lru_cache(maxsize=1)
def verb_cues() -> frozenset[str]:
    return frozenset(textnorm.fold(w) for w in textnorm.read_lexicon_lines("verb_cues.txt"))


@dataclass(frozen=True)
class SvoTerms:
    subjects: frozenset[str]
    objects: frozenset[str]
    low_confidence: bool = False

    def all_terms(self) -> frozenset[str]:
        return self.subjects | self.objects


def extract_svo(text: str) -> SvoTerms:
    """Deterministic, case-insensitive; see the module docstring for the rule."""
    folded = textnorm.fold(textnorm.strip_noise(text))
    cues = verb_cues()
    stop = textnorm.stopwords()
    subjects: set[str] = set()
    objects: set[str] = set()
    found_cue = False
    for clause in CLAUSE_RE.split(folded):
        tokens = textnorm.WORD_RE.findall(clause)
        cue_idx = next((i for i, tok in enumerate(tokens) if tok in cues), None)
        if cue_idx is None:
            continue
        found_cue = True
        subjects.update(t for t in tokens[:cue_idx] if t not in stop)
        objects.update(t for t in tokens[cue_idx + 1 :] if t not in stop)
    if not found_cue:
        all_content = {t for t in textnorm.WORD_RE.findall(folded) if t not in stop}
        return SvoTerms(frozenset(all_content), frozenset(), low_confidence=True)
    return SvoTerms(frozenset(subjects), frozenset(objects))


def shares_subject_or_object(claim_terms: SvoTerms, tweet_text: str) -> bool:
    """True iff any claim subject or object token appears among the tweet's
    content tokens."""
    terms = claim_terms.all_terms()
    if not terms:
        return False
    return bool(terms & textnorm.content_token_set(tweet_text))


def mentions_neither(claim_terms: SvoTerms, tweet_text: str) -> bool:
    return not shares_subject_or_object(claim_terms, tweet_text)
