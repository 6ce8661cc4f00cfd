"""Leave-claim-out cross-validation and classification metrics.

Folds partition claims, not samples: every sample follows its claim, so a
fold's test claims are never seen in its training half. Metrics are standard
precision/recall/F1 per class; a class with no gold and no predicted
positives gets F1 = 0 and is flagged (the degenerate 0/0 convention). Macro
F1 is the unweighted mean over the three classes; the aggregate view is the
arithmetic mean over completed folds.
"""
from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .corpus import InputError
from .enrichment import TrainingSample
from .scorer import Label, PairScorer

log = logging.getLogger(__name__)

LABELS = (Label.MISINFORMATION, Label.DEBUNK, Label.IRRELEVANT)


@dataclass(frozen=True)
class LabeledPair:
    claim_id: str
    claim_text: str
    sample_text: str
    gold: Label


def load_labeled_pairs(path: str | Path) -> list[LabeledPair]:
    """JSONL records {claim_id, claim, text, label}."""
    pairs = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read labeled pairs {path}: {exc}") from exc
    with fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            pairs.append(
                LabeledPair(
                    claim_id=str(rec["claim_id"]),
                    claim_text=str(rec["claim"]),
                    sample_text=str(rec["text"]),
                    gold=Label(rec["label"]),
                )
            )
    return pairs


@dataclass
class Fold:
    index: int
    train: list[LabeledPair]
    test: list[LabeledPair]

    def train_claims(self) -> set[str]:
        return {p.claim_id for p in self.train}

    def test_claims(self) -> set[str]:
        return {p.claim_id for p in self.test}


def split_leave_claim_out(dataset: Sequence[LabeledPair], folds: int = 5, seed: int = 0) -> list[Fold]:
    """Seeded shuffle of the distinct claim ids, dealt round-robin to folds;
    a sample is in a fold's test half iff its claim is."""
    if folds < 1:
        raise ValueError(f"folds must be >= 1, got {folds}")
    claim_ids = sorted({p.claim_id for p in dataset})
    if len(claim_ids) < folds:
        raise ValueError(f"need at least {folds} distinct claims, got {len(claim_ids)}")
    rng = random.Random(seed)
    rng.shuffle(claim_ids)
    assignment = {cid: i % folds for i, cid in enumerate(claim_ids)}
    out = []
    for i in range(folds):
        test = [p for p in dataset if assignment[p.claim_id] == i]
        train = [p for p in dataset if assignment[p.claim_id] != i]
        out.append(Fold(index=i, train=train, test=test))
    return out


def _normalize_claim_text(text: str) -> str:
    return " ".join(text.lower().split())


def exclude_overlapping_claims(
    enriched: Sequence[TrainingSample], test_claim_texts: Sequence[str]
) -> list[TrainingSample]:
    """Drop enriched samples whose claim text equals any test claim after
    lowercasing and whitespace collapse."""
    blocked = {_normalize_claim_text(t) for t in test_claim_texts}
    return [s for s in enriched if _normalize_claim_text(s.claim_text) not in blocked]


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    degenerate: bool = False  # no gold and no predicted positives

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "degenerate": self.degenerate,
        }


@dataclass
class FoldMetrics:
    index: int
    accuracy: float
    per_class: dict[str, ClassMetrics]
    macro_f1: float
    confusion: dict[str, dict[str, int]]
    n_samples: int
    failed: bool = False
    error: str = ""

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "accuracy": self.accuracy,
            "per_class": {k: v.to_dict() for k, v in self.per_class.items()},
            "macro_f1": self.macro_f1,
            "confusion": self.confusion,
            "n_samples": self.n_samples,
            "failed": self.failed,
            "error": self.error,
        }


@dataclass
class MetricsReport:
    folds: list[FoldMetrics]
    accuracy: float
    macro_f1: float
    per_class_f1: dict[str, float]
    completed_folds: int
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "folds": [f.to_dict() for f in self.folds],
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "per_class_f1": self.per_class_f1,
            "completed_folds": self.completed_folds,
            "warnings": self.warnings,
        }

    def to_text(self) -> str:
        """Plain-text metric table, one row per view."""
        lines = [
            f"{'view':<12} {'accuracy':>9} {'macro F1':>9} "
            + " ".join(f"{lab.value[:9]:>9}" for lab in LABELS)
        ]
        for fm in self.folds:
            if fm.failed:
                lines.append(f"fold {fm.index:<7} FAILED: {fm.error}")
                continue
            cells = " ".join(f"{fm.per_class[lab.value].f1:>9.4f}" for lab in LABELS)
            lines.append(f"fold {fm.index:<7} {fm.accuracy:>9.4f} {fm.macro_f1:>9.4f} {cells}")
        cells = " ".join(f"{self.per_class_f1[lab.value]:>9.4f}" for lab in LABELS)
        lines.append(f"{'average':<12} {self.accuracy:>9.4f} {self.macro_f1:>9.4f} {cells}")
        return "\n".join(lines)


def classification_metrics(gold: Sequence[Label], predicted: Sequence[Label]) -> tuple[float, dict[str, ClassMetrics], float, dict]:
    """(accuracy, per-class metrics, macro F1, confusion matrix)."""
    if len(gold) != len(predicted):
        raise ValueError(f"length mismatch: {len(gold)} gold vs {len(predicted)} predicted")
    if not gold:
        raise ValueError("cannot compute metrics on an empty sample set")
    confusion = {g.value: {p.value: 0 for p in LABELS} for g in LABELS}
    correct = 0
    for g, p in zip(gold, predicted):
        confusion[g.value][p.value] += 1
        correct += g is p
    accuracy = correct / len(gold)
    per_class: dict[str, ClassMetrics] = {}
    for label in LABELS:
        tp = confusion[label.value][label.value]
        fp = sum(confusion[other.value][label.value] for other in LABELS if other is not label)
        fn = sum(confusion[label.value][other.value] for other in LABELS if other is not label)
        degenerate = tp + fp + fn == 0
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label.value] = ClassMetrics(precision, recall, f1, degenerate)
    macro = sum(per_class[lab.value].f1 for lab in LABELS) / len(LABELS)
    return accuracy, per_class, macro, confusion


def evaluate(scorer: PairScorer, folds: Sequence[Fold]) -> MetricsReport:
    """Score each fold's test pairs; aggregate = mean over completed folds."""
    fold_metrics: list[FoldMetrics] = []
    warnings: list[str] = []
    for fold in folds:
        leak = fold.train_claims() & fold.test_claims()
        if leak:
            raise ValueError(f"claim leakage in fold {fold.index}: {sorted(leak)[:5]}")
        try:
            results = scorer.score_batch([(p.claim_text, p.sample_text) for p in fold.test])
            predicted = [label for label, _conf in results]
            gold = [p.gold for p in fold.test]
            accuracy, per_class, macro, confusion = classification_metrics(gold, predicted)
            fold_metrics.append(
                FoldMetrics(fold.index, accuracy, per_class, macro, confusion, len(fold.test))
            )
        except Exception as exc:
            msg = f"fold {fold.index} failed: {type(exc).__name__}: {exc}"
            warnings.append(msg)
            log.warning(msg)
            fold_metrics.append(
                FoldMetrics(fold.index, 0.0, {}, 0.0, {}, len(fold.test), failed=True, error=str(exc))
            )
    completed = [f for f in fold_metrics if not f.failed]
    if not completed:
        raise RuntimeError("every fold failed; no metrics to report")
    n = len(completed)
    report = MetricsReport(
        folds=fold_metrics,
        accuracy=sum(f.accuracy for f in completed) / n,
        macro_f1=sum(f.macro_f1 for f in completed) / n,
        per_class_f1={
            lab.value: sum(f.per_class[lab.value].f1 for f in completed) / n for lab in LABELS
        },
        completed_folds=n,
        warnings=warnings,
    )
    return report
