import math
import random
from dataclasses import replace

import pytest
import scipy.stats

from claimsift.analytics import sample_comparison_set
from claimsift.corpus import InputError
from claimsift.lexstats import (
    Group,
    build_feature_matrix,
    build_lexicon_matrix,
    lexicon_frequencies,
    load_lexicon,
    point_biserial,
    select_bow_features,
    tfidf_vector,
    top_correlated,
)
from claimsift.stats import ZeroVarianceError, pearson_r

from oracles import point_biserial_reference


def random_docs(rng, n_docs, vocab=30, max_len=20):
    return [
        " ".join(f"w{rng.randrange(vocab)}" for _ in range(rng.randint(1, max_len)))
        for _ in range(n_docs)
    ]


class TestFeatureSelection:
    def test_bounds_strict(self):
        # t = 20, bound is 3 < df < 8
        docs = []
        for i in range(20):
            tokens = ["filler%d" % i]
            if i < 3:
                tokens.append("three")
            if i < 4:
                tokens.append("four")
            if i < 7:
                tokens.append("seven")
            if i < 8:
                tokens.append("eight")
            docs.append(" ".join(tokens))
        feats = select_bow_features(docs)
        assert "three" not in feats.terms  # df == 3 fails the lower bound
        assert "eight" not in feats.terms  # df == 8 == 0.4t fails the upper bound
        assert "four" in feats.terms
        assert "seven" in feats.terms

    def test_bounds_hold_on_random_corpora(self):
        rng = random.Random(21)
        for trial in range(30):
            docs = random_docs(rng, rng.randint(5, 120))
            t = len(docs)
            feats = select_bow_features(docs)
            for term in feats.terms:
                assert 3 < feats.df[term] < 0.4 * t, (term, feats.df[term], t)

    def test_ranking_by_tfidf_sum(self):
        # "hot" appears 6 times in 4 of 12 docs; "mild" 4 times in 4 docs
        docs = ["hot hot mild", "hot hot mild", "hot mild", "hot mild"] + ["pad%d" % i for i in range(8)]
        feats = select_bow_features(docs, max_df_ratio=0.9)
        assert feats.terms.index("hot") < feats.terms.index("mild")
        assert feats.score["hot"] == pytest.approx(6 * math.log(12 / 4))
        assert feats.score["mild"] == pytest.approx(4 * math.log(12 / 4))

    def test_tie_breaks_lexicographic(self):
        docs = ["zebra apple", "zebra apple", "zebra apple", "zebra apple"] + [
            "pad%d" % i for i in range(8)
        ]
        feats = select_bow_features(docs, max_df_ratio=0.9)
        assert feats.score["apple"] == feats.score["zebra"]
        assert feats.terms.index("apple") < feats.terms.index("zebra")

    def test_top_k_truncates(self):
        docs = [" ".join(f"w{j}" for j in range(10)) for _ in range(5)] + ["solo"] * 5
        feats = select_bow_features(docs, max_df_ratio=0.9, top_k=3)
        assert len(feats) == 3

    def test_empty_selection_warns(self, caplog):
        with caplog.at_level("WARNING"):
            feats = select_bow_features(["a", "b"])
        assert feats.terms == []
        assert any("no term survived" in rec.message for rec in caplog.records)


class TestTfidf:
    def test_frozen_value(self):
        docs = ["spice spice", "spice", "plain", "plain"]
        feats = select_bow_features(docs, min_df_exclusive=1, max_df_ratio=0.9)
        assert "spice" in feats.df and feats.df["spice"] == 2
        vec = tfidf_vector("spice spice other", feats)
        assert vec["spice"] == pytest.approx(2 * math.log(4 / 2))
        assert "other" not in vec

    def test_absent_feature_omitted(self):
        docs = ["aa bb", "aa bb", "aa", "aa"]
        feats = select_bow_features(docs, min_df_exclusive=1, max_df_ratio=0.9)
        assert tfidf_vector("zz", feats) == {}

    def test_matrix_shape_and_values(self):
        docs = ["aa aa", "aa", "bb", "cc"]
        feats = select_bow_features(docs, min_df_exclusive=0, max_df_ratio=0.9)
        matrix = build_feature_matrix(docs, feats)
        assert set(matrix) == set(feats.terms)
        for series in matrix.values():
            assert len(series) == len(docs)
        assert matrix["aa"][0] == pytest.approx(2 * math.log(4 / 2))
        assert matrix["aa"][2] == 0.0


class TestPointBiserial:
    def test_against_scipy(self):
        rng = random.Random(13)
        for _ in range(50):
            n = rng.randint(5, 60)
            y = [rng.randint(0, 1) for _ in range(n)]
            if len(set(y)) < 2:
                y[0], y[1] = 0, 1
            x = [rng.gauss(float(yi), 1.5) for yi in y]
            r, p = point_biserial(x, y)
            ref = scipy.stats.pointbiserialr(y, x)
            assert r == pytest.approx(ref.correlation, abs=1e-9)
            assert p == pytest.approx(ref.pvalue, abs=1e-9)

    def test_against_streaming_pearson(self):
        rng = random.Random(14)
        for _ in range(30):
            n = rng.randint(4, 40)
            y = [rng.randint(0, 1) for _ in range(n)]
            if len(set(y)) < 2:
                y[0], y[1] = 0, 1
            x = [rng.uniform(-2, 2) for _ in range(n)]
            if len(set(x)) < 2:
                x[0] += 1.0
            r, _ = point_biserial(x, y)
            assert r == pytest.approx(pearson_r(x, [float(v) for v in y]), abs=1e-9)

    def test_against_reference_oracle(self):
        rng = random.Random(15)
        for _ in range(30):
            n = rng.randint(4, 40)
            y = [rng.randint(0, 1) for _ in range(n)]
            if len(set(y)) < 2:
                y[0], y[1] = 0, 1
            x = [rng.uniform(0, 5) for _ in range(n)]
            if len(set(x)) < 2:
                x[0] += 1.0
            r, p = point_biserial(x, y)
            ref_r, ref_p = point_biserial_reference(x, y)
            assert abs(r - ref_r) < 1e-9
            assert abs(p - ref_p) < 1e-6

    def test_label_swap_negates_r_bitwise(self):
        rng = random.Random(16)
        for _ in range(40):
            n = rng.randint(4, 30)
            y = [rng.randint(0, 1) for _ in range(n)]
            if len(set(y)) < 2:
                y[0], y[1] = 0, 1
            x = [rng.uniform(-1, 1) for _ in range(n)]
            if len(set(x)) < 2:
                x[0] += 0.5
            r1, p1 = point_biserial(x, y)
            r2, p2 = point_biserial(x, [1 - v for v in y])
            assert r2 == -r1  # exact, not approximate
            assert p2 == p1

    def test_constant_labels_raise(self):
        with pytest.raises(ZeroVarianceError):
            point_biserial([1.0, 2.0, 3.0], [1, 1, 1])

    def test_constant_feature_raises(self):
        with pytest.raises(ZeroVarianceError):
            point_biserial([2.0, 2.0, 2.0, 2.0], [0, 1, 0, 1])

    def test_too_short_and_mismatch(self):
        with pytest.raises(ValueError, match="at least 3"):
            point_biserial([1.0, 2.0], [0, 1])
        with pytest.raises(ValueError, match="mismatch"):
            point_biserial([1.0, 2.0, 3.0], [0, 1])

    def test_perfect_separation(self):
        r, p = point_biserial([0.0, 0.0, 1.0, 1.0], [0, 0, 1, 1])
        assert r == 1.0
        assert p == 0.0


class TestTopCorrelated:
    def build(self):
        # pos correlates with label, neg anti-correlates, flat is constant
        labels = [1, 1, 1, 1, 0, 0, 0, 0]
        matrix = {
            "pos": [5.0, 4.5, 5.2, 4.8, 1.0, 1.2, 0.9, 1.1],
            "neg": [1.0, 1.1, 0.9, 1.2, 5.0, 5.1, 4.9, 5.2],
            "flat": [2.0] * 8,
        }
        return matrix, labels

    def test_lists_and_report(self):
        matrix, labels = self.build()
        mis, non, report = top_correlated(matrix, labels)
        assert [fc.feature for fc in mis] == ["pos"]
        assert [fc.feature for fc in non] == ["neg"]
        assert mis[0].group is Group.MISINFORMATION
        assert non[0].group is Group.NON_MISINFORMATION
        assert report == {"tested": 3, "skipped_zero_variance": 1, "significant": 2}

    def test_label_swap_swaps_lists_exactly(self):
        matrix, labels = self.build()
        mis, non, _ = top_correlated(matrix, labels)
        mis2, non2, _ = top_correlated(matrix, [1 - v for v in labels])
        assert mis2 == [replace(fc, r=-fc.r, group=Group.MISINFORMATION) for fc in non]
        assert non2 == [replace(fc, r=-fc.r, group=Group.NON_MISINFORMATION) for fc in mis]

    def test_insignificant_excluded(self):
        rng = random.Random(3)
        labels = [rng.randint(0, 1) for _ in range(40)]
        labels[0], labels[1] = 0, 1
        noise = {"noise": [rng.uniform(0, 1) for _ in range(40)]}
        mis, non, report = top_correlated(noise, labels, alpha=1e-6)
        assert mis == [] and non == []
        assert report["significant"] == 0

    def test_zero_r_joins_neither_list(self):
        labels = [1, 0, 1, 0]
        matrix = {"sym": [1.0, 1.0, 2.0, 2.0]}
        mis, non, report = top_correlated(matrix, labels, alpha=2.0)
        assert mis == [] and non == []
        assert report["significant"] == 1  # tested and significant, but r == 0

    def test_k_truncation_keeps_strongest(self):
        labels = [1, 1, 1, 1, 0, 0, 0, 0]
        matrix = {
            f"f{i}": [5.0 - 0.1 * i * j for j in range(4)] + [1.0] * 4 for i in range(5)
        }
        mis, _, _ = top_correlated(matrix, labels, k=2)
        assert len(mis) == 2
        full, _, _ = top_correlated(matrix, labels, k=100)
        assert [fc.feature for fc in mis] == [fc.feature for fc in full][:2]


class TestLexicon:
    DIC = (
        "%\n"
        "1\tPRONOUN\n"
        "2\tEXCLAIM\n"
        "%\n"
        "we\t1\n"
        "our*\t1\n"
        "wow\t1\t2\n"
        "!!\t2\n"
    )

    def write(self, tmp_path, text=None):
        p = tmp_path / "lex.dic"
        p.write_text(text if text is not None else self.DIC, encoding="utf-8")
        return p

    def test_parse(self, tmp_path):
        lex = load_lexicon(self.write(tmp_path))
        assert lex.names() == ["PRONOUN", "EXCLAIM"]
        pronoun, exclaim = lex.categories
        assert pronoun.matches_token("we")
        assert pronoun.matches_token("ours")  # prefix our*
        assert not pronoun.matches_token("week")
        assert pronoun.matches_token("wow") and exclaim.matches_token("wow")
        assert exclaim.punct_patterns == ("!!",)

    def test_word_frequency(self, tmp_path):
        lex = load_lexicon(self.write(tmp_path))
        freqs = lexicon_frequencies("we we go", lex)
        assert freqs["PRONOUN"] == pytest.approx(2 / 3)

    def test_punct_counted_on_stripped_text(self, tmp_path):
        lex = load_lexicon(self.write(tmp_path))
        freqs = lexicon_frequencies("wow!!! ok https://spam.example/!!", lex)
        # tokens: wow, ok, 2 words; '!!' occurs once in '!!!' (non-overlapping),
        # URL is stripped before counting
        assert freqs["EXCLAIM"] == pytest.approx((1 + 1) / 2)

    def test_empty_doc_zeroes(self, tmp_path, caplog):
        lex = load_lexicon(self.write(tmp_path))
        with caplog.at_level("WARNING"):
            freqs = lexicon_frequencies("", lex)
        assert set(freqs.values()) == {0.0}

    def test_bundled_demo(self):
        lex = load_lexicon()
        assert len(lex.categories) == 12

    def test_bad_header(self, tmp_path):
        with pytest.raises(InputError, match="open with"):
            load_lexicon(self.write(tmp_path, "we\t1\n"))

    def test_unclosed_header(self, tmp_path):
        with pytest.raises(InputError, match="never closed"):
            load_lexicon(self.write(tmp_path, "%\n1\tA\n"))

    def test_unknown_category_id(self, tmp_path):
        with pytest.raises(InputError, match="unknown category"):
            load_lexicon(self.write(tmp_path, "%\n1\tA\n%\nwe\t9\n"))

    def test_bad_pattern_line(self, tmp_path):
        with pytest.raises(InputError, match="bad lexicon pattern"):
            load_lexicon(self.write(tmp_path, "%\n1\tA\n%\nlonely\n"))

    def test_matrix(self, tmp_path):
        lex = load_lexicon(self.write(tmp_path))
        matrix = build_lexicon_matrix(["we go", "nothing here"], lex)
        assert matrix["PRONOUN"] == [pytest.approx(0.5), 0.0]


@pytest.fixture(scope="module")
def groups(corp, misinfo):
    mis_ids = sorted(misinfo.tweet_ids())
    cmp_ids = sample_comparison_set(corp, misinfo.tweet_ids(), n=250, seed=0)
    docs = [corp.text_of(t) for t in mis_ids] + [corp.text_of(t) for t in cmp_ids]
    labels = [1] * len(mis_ids) + [0] * len(cmp_ids)
    return docs, labels


class TestOnFixture:
    def test_selected_terms_obey_bounds(self, groups):
        docs, _ = groups
        feats = select_bow_features(docs)
        assert feats.terms
        t = len(docs)
        for term in feats.terms:
            assert 3 < feats.df[term] < 0.4 * t

    def test_swap_on_real_matrix(self, groups):
        docs, labels = groups
        feats = select_bow_features(docs, top_k=150)
        matrix = build_feature_matrix(docs, feats)
        mis, non, report = top_correlated(matrix, labels)
        mis2, non2, _ = top_correlated(matrix, [1 - v for v in labels])
        assert mis2 == [replace(fc, r=-fc.r, group=Group.MISINFORMATION) for fc in non]
        assert non2 == [replace(fc, r=-fc.r, group=Group.NON_MISINFORMATION) for fc in mis]
        assert report["significant"] > 0
