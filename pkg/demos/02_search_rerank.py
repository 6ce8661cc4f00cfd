"""
Candidate retrieval: BM25 then embedding rerank
===============================================

Builds the inverted index over the corpus, pulls a wide BM25 candidate pool
for one claim, then reranks it by cosine similarity of hashed character
trigram embeddings. The two stages trade recall for precision before any
pairwise scoring happens.
"""
import tempfile
from pathlib import Path

from claimsift import synth
from claimsift.corpus import ingest_claims, ingest_tweets
from claimsift.embedding import rerank
from claimsift.index import InvertedIndex

work = Path(tempfile.mkdtemp(prefix="claimsift_demo_"))
fixture = synth.build_fixture(work / "fixture", seed=0)
corpus = ingest_tweets(fixture["tweets"])
claims = ingest_claims(fixture["claims"])
claim = claims.get("c03")
print(f"claim {claim.id}: {claim.text!r}")

# stage 1: sparse retrieval over the whole corpus
index = InvertedIndex.build(corpus)
print(f"\nindex: {index.n_docs} docs, {len(index.postings)} terms")
pool = index.search(claim.text, k=200)
print(f"BM25 pool: {len(pool)} candidates, top 5:")
for tid, score in pool[:5]:
    print(f"  {score:7.3f}  {tid}  {corpus.get(tid).text[:60]}")

# stage 2: dense rerank of the pool
reranked = rerank(claim.text, {tid: corpus.get(tid).text for tid, _ in pool}, k=20)
print(f"\ncosine rerank keeps {len(reranked)}, top 5:")
for tid, sim in reranked[:5]:
    print(f"  {sim:7.4f}  {tid}  {corpus.get(tid).text[:60]}")

# the index round-trips through its on-disk layout
index.save(work / "index")
reloaded = InvertedIndex.load(work / "index")
assert reloaded.search(claim.text, k=200) == pool
print(f"\nindex persisted to {work / 'index'} and reloaded: identical ranking")
