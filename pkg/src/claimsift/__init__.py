"""claimsift: corpus-scale extraction and analysis of misinformation tweets
paired against fact-checked claims.

The package is organized as a library of composable stages:

  corpus      ingestion and validation of tweets, claims, statuses, events
  index       inverted index with Okapi BM25 retrieval
  embedding   hashed character-trigram embedder and cosine rerank
  svo         heuristic subject/verb/object splitting
  scorer      pairwise claim/tweet scoring (lexical baseline + HTTP client)
  pipeline    retrieve -> rerank -> window -> score -> post-filter
  enrichment  weak-label training pair construction
  evaluation  leave-claim-out cross-validation and classification metrics
  analytics   topic distributions, live-status breakdowns, spread curves
  lexstats    bag-of-words correlates and lexicon category profiling
  stats       streaming Pearson correlation with exact p-values
  config      run configuration, canonical hashing, artifact provenance
  cli         the ``claimsift`` command-line front end
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
