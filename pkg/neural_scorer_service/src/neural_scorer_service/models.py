"""Pair classification models served by the sidecar.

Two mounts are provided. The default lexical model is stdlib-only and fully
deterministic, which keeps the service usable in test rigs with no model
artifacts. The transformer mount wraps any three-class sequence-pair
classifier loadable by the transformers library; inputs are encoded with the
standard pair construction (claim as the first segment, text as the second).
"""
from __future__ import annotations

import hashlib
import math
import re

LABELS = ("MISINFORMATION", "DEBUNK", "IRRELEVANT")

_URL_RE = re.compile(r"https?://\S+")
_TOKEN_RE = re.compile(r"[a-z0-9']+")

_STOPWORDS = frozenset(
    "a an the and or but of to in on for with is are was were be been it this that".split()
)

_DEBUNK_CUES = frozenset(
    "false fake hoax debunked misleading untrue baseless fabricated myth rumor".split()
)


def _tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(_URL_RE.sub(" ", text.lower()))


def _content_tokens(text: str) -> set[str]:
    return {tok for tok in _tokens(text) if tok not in _STOPWORDS}


class LexicalPairModel:
    """Deterministic overlap heuristic over content tokens.

    Containment of the claim's content vocabulary in the text drives the
    label; a debunk cue word flips matched pairs to DEBUNK. Confidence is a
    monotone function of containment, clamped to [0, 1].
    """

    name = "lexical"
    deterministic = True
    embed_dim = 384

    def __init__(self) -> None:
        self.ready = True

    def load(self) -> None:
        pass

    def classify(self, pairs: list[tuple[str, str]]) -> list[tuple[str, float]]:
        return [self._classify_one(claim, text) for claim, text in pairs]

    def _classify_one(self, claim: str, text: str) -> tuple[str, float]:
        claim_terms = _content_tokens(claim)
        text_terms = _content_tokens(text)
        if not claim_terms:
            return "IRRELEVANT", 1.0
        containment = len(claim_terms & text_terms) / len(claim_terms)
        cued = bool(_DEBUNK_CUES & set(_tokens(text)))
        if cued and containment >= 0.2:
            return "DEBUNK", min(1.0, 0.6 + 0.4 * containment)
        if containment >= 0.45:
            return "MISINFORMATION", min(1.0, 0.55 + 0.45 * containment)
        return "IRRELEVANT", max(0.5, min(1.0, 1.0 - containment))

    def embed(self, text: str) -> list[float]:
        """Hashed character-trigram vector, L2-normalized."""
        vec = [0.0] * self.embed_dim
        toks = _tokens(text)
        if not toks:
            vec[0] = 1.0
            return vec
        padded = f"  {' '.join(toks)} "
        for i in range(len(padded) - 2):
            gram = padded[i : i + 3]
            digest = hashlib.sha1(gram.encode("utf-8")).digest()
            bucket = int.from_bytes(digest[:4], "big") % self.embed_dim
            sign = 1.0 if digest[4] & 1 else -1.0
            vec[bucket] += sign
        norm = math.sqrt(sum(v * v for v in vec))
        if norm == 0.0:
            vec[0] = 1.0
            return vec
        return [v / norm for v in vec]


class TransformerPairModel:
    """Any three-class sequence-pair classifier mountable via transformers.

    Load failures leave the model unready instead of raising, so /health can
    report the condition. Inference order inside a batch follows request
    order. Declared non-deterministic: backends are free to vary kernels.
    """

    deterministic = False

    def __init__(self, checkpoint: str):
        self.checkpoint = checkpoint
        self.name = f"transformer:{checkpoint}"
        self.ready = False
        self.error = ""
        self._model = None
        self._tokenizer = None
        self._id2label: dict[int, str] = {}
        self.embed_dim = 0

    def load(self) -> None:
        try:
            import torch  # noqa: F401
            from transformers import AutoModelForSequenceClassification, AutoTokenizer

            self._tokenizer = AutoTokenizer.from_pretrained(self.checkpoint)
            self._model = AutoModelForSequenceClassification.from_pretrained(self.checkpoint)
            self._model.eval()
            self._id2label = self._resolve_labels(self._model.config)
            self.embed_dim = int(self._model.config.hidden_size)
            self.ready = True
        except Exception as exc:
            self.error = f"{type(exc).__name__}: {exc}"
            self.ready = False

    @staticmethod
    def _resolve_labels(config) -> dict[int, str]:
        if config.num_labels != len(LABELS):
            raise ValueError(f"model has {config.num_labels} classes, need {len(LABELS)}")
        mapped = {i: str(name).upper() for i, name in config.id2label.items()}
        if set(mapped.values()) == set(LABELS):
            return mapped
        # generic checkpoints ship LABEL_0.. placeholders; fall back to index order
        return dict(enumerate(LABELS))

    def classify(self, pairs: list[tuple[str, str]]) -> list[tuple[str, float]]:
        import torch

        claims = [c for c, _ in pairs]
        texts = [t for _, t in pairs]
        encoded = self._tokenizer(claims, texts, padding=True, truncation=True, return_tensors="pt")
        with torch.no_grad():
            probs = torch.softmax(self._model(**encoded).logits, dim=-1)
        out = []
        for row in probs:
            idx = int(row.argmax())
            out.append((self._id2label[idx], float(row[idx])))
        return out

    def embed(self, text: str) -> list[float]:
        import torch

        encoded = self._tokenizer(text, truncation=True, return_tensors="pt")
        with torch.no_grad():
            hidden = self._model(**encoded, output_hidden_states=True).hidden_states[-1]
        vec = hidden[0, 0, :].tolist()
        norm = math.sqrt(sum(v * v for v in vec))
        if norm == 0.0:
            vec[0] = 1.0
            return vec
        return [v / norm for v in vec]


def build_model(spec: str):
    """'lexical' or 'transformer:<checkpoint-or-path>'."""
    if spec == "lexical":
        return LexicalPairModel()
    if spec.startswith("transformer:"):
        return TransformerPairModel(spec.split(":", 1)[1])
    raise ValueError(f"unknown model spec {spec!r}")
