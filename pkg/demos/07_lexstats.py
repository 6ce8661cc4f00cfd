"""
Language statistics: BOW correlates and lexicon categories
==========================================================

Contrasts misinformation texts against a comparison sample two ways: tf-idf
weighted bag-of-words features correlated with set membership (point
biserial r with significance filtering), and category frequencies from a
word-category lexicon.
"""
import tempfile
from pathlib import Path

from claimsift import synth
from claimsift.analytics import sample_comparison_set
from claimsift.config import RunConfig
from claimsift.corpus import ingest_claims, ingest_tweets
from claimsift.lexstats import (
    build_feature_matrix,
    build_lexicon_matrix,
    lexicon_frequencies,
    load_lexicon,
    select_bow_features,
    top_correlated,
)
from claimsift.pipeline import extract_misinformation
from claimsift.scorer import BaselineLexicalScorer

work = Path(tempfile.mkdtemp(prefix="claimsift_demo_"))
fixture = synth.build_fixture(work / "fixture", seed=0)
corpus = ingest_tweets(fixture["tweets"])
claims = ingest_claims(fixture["claims"])
misinfo = extract_misinformation(corpus, claims, BaselineLexicalScorer(), RunConfig())

mis_ids = sorted(misinfo.tweet_ids())
cmp_ids = sample_comparison_set(corpus, mis_ids, n=250, seed=0)
docs = [corpus.get(tid).text for tid in mis_ids + cmp_ids]
labels = [1] * len(mis_ids) + [0] * len(cmp_ids)
print(f"{len(mis_ids)} misinformation vs {len(cmp_ids)} comparison texts")

# BOW features: document frequency bounded away from rare and ubiquitous
features = select_bow_features(docs)
print(f"\nselected {len(features)} BOW terms "
      f"(3 < df < {0.4 * len(docs):.0f} over {len(docs)} docs), top by tf-idf mass:")
for term in features.terms[:5]:
    print(f"  {term:15s} df={features.df[term]:3d}  score={features.score[term]:.2f}")

# which terms side with which set, by point biserial correlation
matrix = build_feature_matrix(docs, features)
mis_side, cmp_side, report = top_correlated(matrix, labels, alpha=0.05, k=5)
print(f"\ncorrelation: {report}")
print("misinformation side:")
for fc in mis_side:
    print(f"  r={fc.r:+.3f} p={fc.p:.2e}  {fc.feature}")
print("comparison side:")
for fc in cmp_side:
    print(f"  r={fc.r:+.3f} p={fc.p:.2e}  {fc.feature}")

# lexicon categories over the same split, mean normalized frequency per doc
lexicon = load_lexicon()
print(f"\nlexicon: {len(lexicon.categories)} categories")


def mean_frequencies(texts):
    sums = {name: 0.0 for name in lexicon.names()}
    for text in texts:
        for name, freq in lexicon_frequencies(text, lexicon).items():
            sums[name] += freq
    return {name: total / len(texts) for name, total in sums.items()}


mis_freq = mean_frequencies([corpus.get(t).text for t in mis_ids])
cmp_freq = mean_frequencies([corpus.get(t).text for t in cmp_ids])
print(f"{'category':15s} {'misinfo':>9s} {'comparison':>11s}")
for cat in sorted(lexicon.names())[:8]:
    print(f"{cat:15s} {mis_freq[cat]:9.4f} {cmp_freq[cat]:11.4f}")

# the same lexicon can feed the correlation machinery
lex_matrix = build_lexicon_matrix(docs, lexicon)
lex_mis, lex_cmp, lex_report = top_correlated(lex_matrix, labels, alpha=0.05, k=3)
print(f"\nlexicon-category correlation: {lex_report}")
for fc in lex_mis + lex_cmp:
    print(f"  r={fc.r:+.3f} p={fc.p:.2e}  {fc.feature} ({fc.group.value})")
