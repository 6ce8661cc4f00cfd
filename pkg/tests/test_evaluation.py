import random

import pytest

from claimsift.corpus import InputError
from claimsift.enrichment import SampleSource, TrainingSample
from claimsift.evaluation import (
    Fold,
    LabeledPair,
    classification_metrics,
    evaluate,
    exclude_overlapping_claims,
    load_labeled_pairs,
    split_leave_claim_out,
)
from claimsift.scorer import BaselineLexicalScorer, Label


def mk_pair(cid, gold, text="sample text here", claim="some claim text"):
    return LabeledPair(claim_id=cid, claim_text=claim, sample_text=text, gold=gold)


def balanced_dataset(n_claims=12, per=3):
    pairs = []
    labels = [Label.MISINFORMATION, Label.DEBUNK, Label.IRRELEVANT]
    for i in range(n_claims):
        for j in range(per):
            pairs.append(mk_pair(f"c{i:02d}", labels[j % 3], text=f"text {i} {j}", claim=f"claim {i}"))
    return pairs


class GoldLookupScorer:
    """Oracle that answers from a (claim, text) -> label table."""

    kind = "ORACLE"

    def __init__(self, dataset):
        self.table = {(p.claim_text, p.sample_text): p.gold for p in dataset}

    def score(self, claim_text, tweet_text):
        return self.table[(claim_text, tweet_text)], 1.0

    def score_batch(self, pairs):
        return [self.score(c, t) for c, t in pairs]


class ConstantScorer:
    kind = "CONSTANT"

    def __init__(self, label):
        self.label = label

    def score(self, claim_text, tweet_text):
        return self.label, 1.0

    def score_batch(self, pairs):
        return [(self.label, 1.0) for _ in pairs]


class TestSplit:
    def test_deterministic_for_seed(self):
        data = balanced_dataset()
        a = split_leave_claim_out(data, folds=4, seed=7)
        b = split_leave_claim_out(data, folds=4, seed=7)
        assert [f.test_claims() for f in a] == [f.test_claims() for f in b]

    def test_seed_changes_assignment(self):
        data = balanced_dataset()
        a = split_leave_claim_out(data, folds=4, seed=0)
        b = split_leave_claim_out(data, folds=4, seed=1)
        assert any(x.test_claims() != y.test_claims() for x, y in zip(a, b))

    def test_partition_is_exact(self):
        data = balanced_dataset()
        folds = split_leave_claim_out(data, folds=5, seed=3)
        all_test = [p for f in folds for p in f.test]
        assert sorted(map(id, all_test)) == sorted(map(id, data))
        for fold in folds:
            assert len(fold.train) + len(fold.test) == len(data)

    def test_no_claim_leakage(self):
        data = balanced_dataset()
        for fold in split_leave_claim_out(data, folds=5, seed=11):
            assert fold.train_claims() & fold.test_claims() == set()

    def test_samples_follow_their_claim(self):
        data = balanced_dataset()
        for fold in split_leave_claim_out(data, folds=3, seed=2):
            test_claims = fold.test_claims()
            assert all(p.claim_id in test_claims for p in fold.test)
            assert all(p.claim_id not in test_claims for p in fold.train)

    def test_round_robin_sizes(self):
        data = balanced_dataset(n_claims=10)
        folds = split_leave_claim_out(data, folds=4, seed=0)
        sizes = sorted(len(f.test_claims()) for f in folds)
        assert sizes == [2, 2, 3, 3]

    def test_too_few_claims(self):
        data = balanced_dataset(n_claims=3)
        with pytest.raises(ValueError, match="at least 5 distinct claims"):
            split_leave_claim_out(data, folds=5)

    def test_bad_fold_count(self):
        with pytest.raises(ValueError, match="folds"):
            split_leave_claim_out(balanced_dataset(), folds=0)

    def test_randomized_leakage_sweep(self):
        rng = random.Random(99)
        for trial in range(25):
            n_claims = rng.randint(5, 30)
            data = balanced_dataset(n_claims=n_claims, per=rng.randint(1, 4))
            folds = split_leave_claim_out(data, folds=5, seed=trial)
            for fold in folds:
                assert fold.train_claims() & fold.test_claims() == set()


class TestMetrics:
    def test_perfect(self):
        gold = [Label.MISINFORMATION, Label.DEBUNK, Label.IRRELEVANT]
        acc, per, macro, confusion = classification_metrics(gold, gold)
        assert acc == 1.0 and macro == 1.0
        assert all(m.f1 == 1.0 and not m.degenerate for m in per.values())
        assert confusion["MISINFORMATION"]["MISINFORMATION"] == 1

    def test_constant_prediction_on_balanced_gold(self):
        gold = [Label.MISINFORMATION] * 3 + [Label.DEBUNK] * 3 + [Label.IRRELEVANT] * 3
        predicted = [Label.IRRELEVANT] * 9
        acc, per, macro, _ = classification_metrics(gold, predicted)
        assert acc == pytest.approx(1 / 3)
        # precision 1/3, recall 1 -> F1 = 0.5 for the predicted class, 0 elsewhere
        assert per["IRRELEVANT"].f1 == pytest.approx(0.5)
        assert per["MISINFORMATION"].f1 == 0.0
        assert per["DEBUNK"].f1 == 0.0
        assert macro == pytest.approx(1 / 6)

    def test_degenerate_class_flagged(self):
        gold = [Label.MISINFORMATION, Label.DEBUNK]
        predicted = [Label.MISINFORMATION, Label.DEBUNK]
        _, per, _, _ = classification_metrics(gold, predicted)
        assert per["IRRELEVANT"].degenerate
        assert per["IRRELEVANT"].f1 == 0.0
        assert not per["MISINFORMATION"].degenerate

    def test_absent_gold_with_false_positive_not_degenerate(self):
        gold = [Label.MISINFORMATION, Label.DEBUNK]
        predicted = [Label.IRRELEVANT, Label.DEBUNK]
        _, per, _, _ = classification_metrics(gold, predicted)
        assert not per["IRRELEVANT"].degenerate
        assert per["IRRELEVANT"].precision == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            classification_metrics([Label.DEBUNK], [])

    def test_empty(self):
        with pytest.raises(ValueError, match="empty"):
            classification_metrics([], [])

    def test_confusion_row_sums(self):
        rng = random.Random(5)
        labels = list(Label)
        gold = [rng.choice(labels) for _ in range(60)]
        predicted = [rng.choice(labels) for _ in range(60)]
        _, _, _, confusion = classification_metrics(gold, predicted)
        for g in labels:
            assert sum(confusion[g.value].values()) == gold.count(g)


class TestEvaluate:
    def test_oracle_scorer_is_exact(self):
        data = balanced_dataset()
        folds = split_leave_claim_out(data, folds=4, seed=1)
        report = evaluate(GoldLookupScorer(data), folds)
        assert report.accuracy == 1.0
        assert report.macro_f1 == 1.0
        assert report.completed_folds == 4
        assert report.warnings == []

    def test_leakage_detected(self):
        shared = mk_pair("c1", Label.DEBUNK)
        fold = Fold(index=0, train=[shared], test=[shared])
        with pytest.raises(ValueError, match="leakage"):
            evaluate(ConstantScorer(Label.DEBUNK), [fold])

    def test_fold_failure_isolated(self):
        data = balanced_dataset(n_claims=4)
        folds = split_leave_claim_out(data, folds=2, seed=0)

        class Flaky(GoldLookupScorer):
            calls = 0

            def score_batch(self, pairs):
                Flaky.calls += 1
                if Flaky.calls == 1:
                    raise RuntimeError("transient")
                return super().score_batch(pairs)

        report = evaluate(Flaky(data), folds)
        assert report.completed_folds == 1
        assert report.folds[0].failed and not report.folds[1].failed
        assert "transient" in report.folds[0].error
        assert len(report.warnings) == 1
        assert report.accuracy == 1.0  # mean over the completed fold only

    def test_all_folds_failing_raises(self):
        data = balanced_dataset(n_claims=4)
        folds = split_leave_claim_out(data, folds=2, seed=0)

        class Dead:
            kind = "DEAD"

            def score_batch(self, pairs):
                raise RuntimeError("down")

        with pytest.raises(RuntimeError, match="every fold failed"):
            evaluate(Dead(), folds)

    def test_report_text_contains_rows(self):
        data = balanced_dataset()
        report = evaluate(GoldLookupScorer(data), split_leave_claim_out(data, folds=3, seed=0))
        text = report.to_text()
        assert "fold 0" in text and "average" in text
        assert "1.0000" in text

    def test_report_dict_round_trip_shape(self):
        data = balanced_dataset()
        report = evaluate(GoldLookupScorer(data), split_leave_claim_out(data, folds=3, seed=0))
        d = report.to_dict()
        assert set(d) == {"folds", "accuracy", "macro_f1", "per_class_f1", "completed_folds", "warnings"}
        assert len(d["folds"]) == 3


class TestExcludeOverlap:
    def make_enriched(self):
        return [
            TrainingSample(f"Claim number {i}", "text", Label.DEBUNK, SampleSource.IFCN, str(i), "x")
            for i in range(10)
        ]

    def test_exact_and_normalized_matches_removed(self):
        enriched = self.make_enriched()
        blocked = ["claim   NUMBER 3", "Claim number 7"]
        kept = exclude_overlapping_claims(enriched, blocked)
        assert len(kept) == 8
        assert {s.provenance_id for s in kept} == {str(i) for i in range(10)} - {"3", "7"}

    def test_no_overlap_keeps_all(self):
        enriched = self.make_enriched()
        assert exclude_overlapping_claims(enriched, ["something else"]) == enriched

    def test_empty_blocklist(self):
        enriched = self.make_enriched()
        assert exclude_overlapping_claims(enriched, []) == enriched


class TestFixtureEvaluation:
    def test_labeled_pairs_load(self, fixture):
        pairs = load_labeled_pairs(fixture["labeled_pairs"])
        assert len(pairs) == 65
        assert {p.gold for p in pairs} == set(Label)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            load_labeled_pairs(tmp_path / "none.jsonl")

    def test_baseline_scorer_end_to_end(self, fixture):
        pairs = load_labeled_pairs(fixture["labeled_pairs"])
        folds = split_leave_claim_out(pairs, folds=5, seed=0)
        report = evaluate(BaselineLexicalScorer(), folds)
        assert report.completed_folds == 5
        assert 0.8 < report.accuracy <= 1.0
        assert 0.8 < report.macro_f1 <= 1.0

    def test_gold_lookup_on_fixture_is_perfect(self, fixture):
        pairs = load_labeled_pairs(fixture["labeled_pairs"])
        folds = split_leave_claim_out(pairs, folds=5, seed=0)
        report = evaluate(GoldLookupScorer(pairs), folds)
        assert report.accuracy == 1.0 and report.macro_f1 == 1.0
