"""Sidecar scorer service: pairwise claim/text classification and sentence
embeddings over a small JSON-over-HTTP protocol."""
from .models import LABELS, LexicalPairModel, TransformerPairModel, build_model
from .service import ScorerService

__all__ = [
    "LABELS",
    "LexicalPairModel",
    "TransformerPairModel",
    "build_model",
    "ScorerService",
]
