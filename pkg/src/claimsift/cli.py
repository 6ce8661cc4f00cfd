"""The ``claimsift`` command line.

Subcommands: ingest, index, extract, enrich, eval, analyze
{topics|status|spread}, lingstats {bow|lexicon}, report. Every run is driven
by a JSON config file; ``--set section.key=value`` overrides individual
fields. Artifacts land under the run directory, each stamped with the config
hash; a run directory created under a different config hash is never
overwritten.

Exit codes: 0 success, 1 usage or config error, 2 input error, 3 external
scorer failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import date
from pathlib import Path

from . import __version__, analytics, embedding, enrichment, evaluation, lexstats, pipeline, textnorm
from .config import (
    ConfigError,
    RunConfig,
    load_config,
    sha256_file,
    write_csv_artifact,
    write_json_artifact,
    write_jsonl_artifact,
)
from .corpus import (
    ClaimSet,
    Corpus,
    InputError,
    LiveStatusSnapshot,
    SpreadEventLog,
    ingest_claims,
    ingest_spread_events,
    ingest_status_snapshot,
    ingest_tweets,
)
from .index import InvertedIndex
from .scorer import ExternalScorerError, RemoteEmbedder, ScorerBinding, ScorerKind

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_SCORER = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we use 1
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="claimsift", description=__doc__)
    parser.add_argument("--version", action="version", version=f"claimsift {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    def common(p):
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--run-dir", help="override run_dir")
        p.add_argument("--seed", type=int, help="override seed")
        p.add_argument("--workers", type=int, help="override worker count")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override any config field (value parsed as JSON, else string)",
        )
        return p

    for name in ("ingest", "index", "extract", "enrich", "eval", "report"):
        common(sub.add_parser(name))
    analyze = common(sub.add_parser("analyze"))
    analyze.add_argument("statistic", choices=["topics", "status", "spread"])
    lingstats = common(sub.add_parser("lingstats"))
    lingstats.add_argument("analysis", choices=["bow", "lexicon"])
    return parser


def _apply_overrides(data: dict, args) -> dict:
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set needs SECTION.KEY=VALUE, got {item!r}")
        dotted, raw = item.split("=", 1)
        keys = dotted.split(".")
        try:
            value = json.loads(raw)
        except ValueError:
            value = raw
        node = data
        for key in keys[:-1]:
            node = node.setdefault(key, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set {dotted}: {key} is not a section")
        node[keys[-1]] = value
    if args.run_dir is not None:
        data["run_dir"] = args.run_dir
    if args.seed is not None:
        data["seed"] = args.seed
    if args.workers is not None:
        data["workers"] = args.workers
    return data


def _load_run_config(args) -> RunConfig:
    try:
        raw = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    try:
        data = json.loads(raw)
    except ValueError as exc:
        raise ConfigError(f"config {args.config} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config top level must be an object")
    from .config import config_from_dict

    return config_from_dict(_apply_overrides(data, args))


class RunContext:
    """Lazily loads inputs and caches intermediate products for one run."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.run_dir = Path(cfg.run_dir)
        self.config_hash = cfg.config_hash()
        self._cache: dict[str, object] = {}

    def prepare_run_dir(self) -> None:
        """Create the run dir; refuse to reuse one built under another config."""
        self.run_dir.mkdir(parents=True, exist_ok=True)
        guard = self.run_dir / "CONFIG_HASH"
        if guard.exists():
            previous = guard.read_text(encoding="utf-8").strip()
            if previous != self.config_hash:
                raise InputError(
                    f"run dir {self.run_dir} was produced under config hash "
                    f"{previous[:12]}..., current is {self.config_hash[:12]}...; "
                    "refusing to overwrite"
                )
        else:
            guard.write_text(self.config_hash + "\n", encoding="utf-8")

    def _memo(self, key: str, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    # ------------------------------------------------------------------ inputs
    def corpus(self) -> Corpus:
        def build():
            if not self.cfg.paths.tweets:
                raise InputError("paths.tweets is not configured")
            window = None
            ing = self.cfg.ingest
            if ing.collection_start or ing.collection_end:
                window = (
                    date.fromisoformat(ing.collection_start) if ing.collection_start else None,
                    date.fromisoformat(ing.collection_end) if ing.collection_end else None,
                )
            return ingest_tweets(self.cfg.paths.tweets, self._keywords(), window)

        return self._memo("corpus", build)

    def _keywords(self):
        spec = self.cfg.paths.keywords
        if not spec:
            return None
        if spec == "builtin":
            return textnorm.default_keywords()
        try:
            lines = Path(spec).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise InputError(f"cannot read keyword list {spec}: {exc}") from exc
        return [ln.strip() for ln in lines if ln.strip() and not ln.startswith("#")]

    def claims(self) -> ClaimSet:
        def build():
            if not self.cfg.paths.claims:
                raise InputError("paths.claims is not configured")
            return ingest_claims(self.cfg.paths.claims)

        return self._memo("claims", build)

    def snapshot(self) -> LiveStatusSnapshot:
        def build():
            if not self.cfg.paths.snapshot:
                return LiveStatusSnapshot({}, None, len(self.corpus()), 0)
            return ingest_status_snapshot(self.cfg.paths.snapshot, self.corpus())

        return self._memo("snapshot", build)

    def events(self) -> SpreadEventLog:
        def build():
            if not self.cfg.paths.events:
                raise InputError("paths.events is not configured")
            return ingest_spread_events(self.cfg.paths.events, self.corpus())

        return self._memo("events", build)

    # ------------------------------------------------------- derived products
    def index(self) -> InvertedIndex:
        return self._memo("index", lambda: InvertedIndex.build(self.corpus()))

    def scorer(self):
        def build():
            binding = ScorerBinding(
                kind=ScorerKind(self.cfg.scorer.kind),
                endpoint=self.cfg.scorer.endpoint or None,
                timeout=self.cfg.scorer.timeout,
                retries=self.cfg.scorer.retries,
                batch_size=self.cfg.scorer.batch_size,
                tau_match=self.cfg.pipeline.tau_match,
            )
            return binding.resolve()

        return self._memo("scorer", build)

    def embedder(self):
        def build():
            e = self.cfg.embedder
            if e.kind == "EXTERNAL":
                return RemoteEmbedder(e.endpoint, dim=e.dim)
            return embedding.CachedEmbedder(embedding.TrigramHashEmbedder(e.dim))

        return self._memo("embedder", build)

    def claim_runs(self) -> list[pipeline.ClaimRun]:
        return self._memo(
            "claim_runs",
            lambda: pipeline.run_all_claims(
                self.corpus(), self.claims(), self.scorer(), self.cfg, self.index(), self.embedder()
            ),
        )

    def misinfo(self) -> pipeline.MisinfoSet:
        return self._memo(
            "misinfo",
            lambda: pipeline.extract_misinformation(
                self.corpus(), self.claims(), self.scorer(), self.cfg, claim_runs=self.claim_runs()
            ),
        )

    def comparison_ids(self) -> list[str]:
        return self._memo(
            "comparison_ids",
            lambda: analytics.sample_comparison_set(
                self.corpus(),
                self.misinfo().tweet_ids(),
                self.cfg.analytics.n_comparison,
                self.cfg.seed,
            ),
        )

    def misinfo_topics(self):
        return self._memo(
            "misinfo_topics", lambda: analytics.topics_from_misinfo(self.misinfo(), self.claims())
        )

    def comparison_topics(self):
        def build():
            if not self.cfg.paths.topic_annotations:
                return {}
            return analytics.load_topic_annotations(self.cfg.paths.topic_annotations)

        return self._memo("comparison_topics", build)


# ---------------------------------------------------------------- subcommands
def cmd_ingest(ctx: RunContext) -> None:
    corpus = ctx.corpus()
    corpus.save(ctx.run_dir / "corpus")
    write_json_artifact(
        ctx.run_dir / "ingest_report.json",
        {"report": corpus.report.to_dict(), "document_count": len(corpus)},
        ctx.config_hash,
    )


def cmd_index(ctx: RunContext) -> None:
    idx = ctx.index()
    idx.save(ctx.run_dir / "index")
    write_json_artifact(
        ctx.run_dir / "index_report.json",
        {"document_count": idx.n_docs, "term_count": len(idx.postings), "avgdl": idx.avgdl},
        ctx.config_hash,
    )


def cmd_extract(ctx: RunContext) -> None:
    ctx.misinfo().save(ctx.run_dir / "extraction")


def cmd_enrich(ctx: RunContext) -> None:
    cfg = ctx.cfg
    samples = []
    report: dict = {}
    if cfg.paths.debunk_urls:
        debunk_urls = enrichment.load_debunk_urls(cfg.paths.debunk_urls)
    else:
        debunk_urls = frozenset()
    credible = enrichment.load_credible_accounts(cfg.paths.credible_accounts or None)
    collection, collection_report = enrichment.enrich_from_collection(
        ctx.corpus(),
        ctx.claims(),
        ctx.claim_runs(),
        ctx.snapshot(),
        debunk_urls,
        credible,
        cfg.enrich.conf_threshold,
    )
    samples.extend(collection)
    report["collection"] = collection_report
    if cfg.paths.seed_annotated:
        samples.extend(enrichment.load_seed_annotated(cfg.paths.seed_annotated))
    if cfg.paths.covidlies:
        samples.extend(enrichment.load_covidlies(cfg.paths.covidlies))
    if cfg.paths.ifcn_articles:
        articles = enrichment.load_ifcn_articles(cfg.paths.ifcn_articles)
        samples.extend(enrichment.enrich_from_ifcn(articles))
    kept, discarded = enrichment.clean_pairs(samples)
    report["cleaning"] = {"kept": len(kept), "discarded": len(discarded)}
    report["dataset"] = enrichment.dataset_report(kept)
    out = ctx.run_dir / "enrichment"
    out.mkdir(parents=True, exist_ok=True)
    write_jsonl_artifact(out / "samples.jsonl", [s.to_record() for s in kept], ctx.config_hash)
    write_jsonl_artifact(out / "discarded.jsonl", [s.to_record() for s in discarded], ctx.config_hash)
    write_json_artifact(out / "report.json", report, ctx.config_hash)


def cmd_eval(ctx: RunContext) -> None:
    cfg = ctx.cfg
    if not cfg.paths.labeled_pairs:
        raise InputError("paths.labeled_pairs is not configured")
    dataset = evaluation.load_labeled_pairs(cfg.paths.labeled_pairs)
    folds = evaluation.split_leave_claim_out(dataset, cfg.eval.folds, cfg.seed)
    report = evaluation.evaluate(ctx.scorer(), folds)
    out = ctx.run_dir / "evaluation"
    out.mkdir(parents=True, exist_ok=True)
    write_json_artifact(out / "metrics.json", report.to_dict(), ctx.config_hash)
    with open(out / "metrics.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# config_hash={ctx.config_hash}\n" + report.to_text() + "\n")


def _analytics_dir(ctx: RunContext) -> Path:
    out = ctx.run_dir / "analytics"
    out.mkdir(parents=True, exist_ok=True)
    return out


def _group_sets(ctx: RunContext):
    """(group name, tweet ids, topic join) for both compared populations."""
    mis_ids = sorted(ctx.misinfo().tweet_ids())
    return [
        ("misinformation", mis_ids, ctx.misinfo_topics()),
        ("comparison", ctx.comparison_ids(), ctx.comparison_topics()),
    ]


def cmd_analyze_topics(ctx: RunContext) -> None:
    rows = []
    payload = {}
    for group, ids, topics_of in _group_sets(ctx):
        dist = analytics.topic_distribution(ids, topics_of)
        payload[group] = dist.to_dict()
        props = dist.proportions
        for topic in sorted(dist.counts, key=lambda t: t.value):
            rows.append([group, topic.value, str(dist.counts[topic]), float(props[topic])])
    out = _analytics_dir(ctx)
    write_csv_artifact(out / "topics.csv", ["group", "topic", "count", "proportion"], rows, ctx.config_hash)
    write_json_artifact(out / "topics.json", payload, ctx.config_hash)


def cmd_analyze_status(ctx: RunContext) -> None:
    rows = []
    payload = {}
    snapshot = ctx.snapshot()
    for group, ids, topics_of in _group_sets(ctx):
        breakdown = analytics.live_status_breakdown(ids, snapshot, topics_of)
        payload[group] = breakdown.to_dict()
        for topic in sorted(breakdown.table, key=lambda t: t.value):
            for status in sorted(breakdown.table[topic], key=lambda s: s.value):
                rows.append([group, topic.value, status.value, str(breakdown.table[topic][status])])
    out = _analytics_dir(ctx)
    write_csv_artifact(out / "status.csv", ["group", "topic", "status", "count"], rows, ctx.config_hash)
    write_json_artifact(out / "status.json", payload, ctx.config_hash)


def cmd_analyze_spread(ctx: RunContext) -> None:
    cfg = ctx.cfg
    rows = []
    payload = {}
    events = ctx.events()
    for group, ids, topics_of in _group_sets(ctx):
        curves = analytics.spread_power_curve(
            ids,
            events,
            ctx.corpus(),
            cfg.analytics.bin_hours,
            cfg.analytics.horizon_hours,
            topics_of,
        )
        payload[group] = {
            "overall": curves["overall"].to_dict(),
            "by_topic": {t.value: c.to_dict() for t, c in curves.get("by_topic", {}).items()},
        }
        scopes = [("overall", curves["overall"])]
        scopes += [(t.value, c) for t, c in curves.get("by_topic", {}).items()]
        for scope, curve in scopes:
            for k, avg in enumerate(curve.averages):
                rows.append([group, scope, k, k * curve.bin_hours, float(avg)])
    out = _analytics_dir(ctx)
    write_csv_artifact(
        out / "spread.csv",
        ["group", "scope", "bin_index", "bin_start_hours", "average"],
        rows,
        ctx.config_hash,
    )
    write_json_artifact(out / "spread.json", payload, ctx.config_hash)


def _labeled_docs(ctx: RunContext) -> tuple[list[str], list[int]]:
    """Misinformation texts (label 1) then comparison texts (label 0)."""
    corpus = ctx.corpus()
    docs = [corpus.text_of(tid) for tid in sorted(ctx.misinfo().tweet_ids())]
    labels = [1] * len(docs)
    for tid in ctx.comparison_ids():
        docs.append(corpus.text_of(tid))
        labels.append(0)
    return docs, labels


def _correlation_rows(mis, non) -> list[list]:
    return [[fc.feature, float(fc.r), float(fc.p), fc.group.value] for fc in list(mis) + list(non)]


def cmd_lingstats_bow(ctx: RunContext) -> None:
    cfg = ctx.cfg.lingstats
    docs, labels = _labeled_docs(ctx)
    features = lexstats.select_bow_features(
        docs, cfg.min_df_exclusive, cfg.max_df_ratio, cfg.top_k_features
    )
    matrix = lexstats.build_feature_matrix(docs, features)
    mis, non, report = lexstats.top_correlated(matrix, labels, cfg.alpha, cfg.top_k_report)
    out = ctx.run_dir / "lingstats"
    out.mkdir(parents=True, exist_ok=True)
    write_csv_artifact(out / "bow.csv", ["feature", "r", "p", "group"], _correlation_rows(mis, non), ctx.config_hash)
    write_json_artifact(
        out / "bow.json",
        {
            "t": features.t,
            "selected_features": len(features),
            "report": report,
            "misinformation": [fc.to_record() for fc in mis],
            "non_misinformation": [fc.to_record() for fc in non],
        },
        ctx.config_hash,
    )


def cmd_lingstats_lexicon(ctx: RunContext) -> None:
    cfg = ctx.cfg.lingstats
    docs, labels = _labeled_docs(ctx)
    lexicon = lexstats.load_lexicon(ctx.cfg.paths.lexicon or None)
    matrix = lexstats.build_lexicon_matrix(docs, lexicon)
    mis, non, report = lexstats.top_correlated(matrix, labels, cfg.alpha, cfg.top_k_report)
    out = ctx.run_dir / "lingstats"
    out.mkdir(parents=True, exist_ok=True)
    write_csv_artifact(
        out / "lexicon.csv", ["feature", "r", "p", "group"], _correlation_rows(mis, non), ctx.config_hash
    )
    write_json_artifact(
        out / "lexicon.json",
        {
            "categories": lexicon.names(),
            "report": report,
            "misinformation": [fc.to_record() for fc in mis],
            "non_misinformation": [fc.to_record() for fc in non],
        },
        ctx.config_hash,
    )


def cmd_report(ctx: RunContext) -> None:
    """Run every stage, then write a manifest of inputs and artifact digests."""
    cmd_ingest(ctx)
    cmd_index(ctx)
    cmd_extract(ctx)
    cmd_enrich(ctx)
    cmd_eval(ctx)
    cmd_analyze_topics(ctx)
    cmd_analyze_status(ctx)
    cmd_analyze_spread(ctx)
    cmd_lingstats_bow(ctx)
    cmd_lingstats_lexicon(ctx)
    inputs = {}
    for name, value in sorted(vars(ctx.cfg.paths).items()):
        if value and value != "builtin" and Path(value).is_file():
            inputs[name] = {"path": value, "sha256": sha256_file(value)}
    artifacts = {}
    for path in sorted(ctx.run_dir.rglob("*")):
        if path.is_file() and path.name != "manifest.json":
            artifacts[path.relative_to(ctx.run_dir).as_posix()] = sha256_file(path)
    write_json_artifact(
        ctx.run_dir / "manifest.json",
        {"version": __version__, "inputs": inputs, "artifacts": artifacts},
        ctx.config_hash,
    )


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        cfg = _load_run_config(args)
        ctx = RunContext(cfg)
        ctx.prepare_run_dir()
        if args.command == "ingest":
            cmd_ingest(ctx)
        elif args.command == "index":
            cmd_index(ctx)
        elif args.command == "extract":
            cmd_extract(ctx)
        elif args.command == "enrich":
            cmd_enrich(ctx)
        elif args.command == "eval":
            cmd_eval(ctx)
        elif args.command == "analyze":
            {
                "topics": cmd_analyze_topics,
                "status": cmd_analyze_status,
                "spread": cmd_analyze_spread,
            }[args.statistic](ctx)
        elif args.command == "lingstats":
            {"bow": cmd_lingstats_bow, "lexicon": cmd_lingstats_lexicon}[args.analysis](ctx)
        elif args.command == "report":
            cmd_report(ctx)
        return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExternalScorerError as exc:
        print(f"external scorer error: {exc}", file=sys.stderr)
        return EXIT_SCORER
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
