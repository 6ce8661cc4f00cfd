"""Deterministic synthetic fixture builder.

Generates a small but structurally complete input set (~1,000 tweet lines,
20 claims) with planted configurations for every pipeline path: verbatim
matches, partial-overlap matches that only pass via subject/object overlap,
sub-threshold rejects, out-of-window copies, debunking tweets with listed
URLs, credible-account posts, removed-tweet statuses (including the
credible+removed collision), spread events straddling bin and horizon
boundaries, malformed lines, and companion training/evaluation files.

Everything derives from one seed; building twice with the same seed yields
byte-identical files. The returned dict maps file roles to paths and lists
the planted (claim_id, tweet_id) pairs so tests can assert against them.
"""
from __future__ import annotations

import csv
import json
import zlib
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from random import Random

TOPICS = [
    "conspiracy theory",
    "general medical advice",
    "prominent actors",
    "community spread and impact",
    "public authority action",
    "virus origin",
    "public preparation",
    "other",
]

SUBJECTS = [
    "Bill Gates",
    "The government",
    "5g towers",
    "Chinese scientists",
    "Big pharma",
    "Garlic water",
    "Hot lemon tea",
    "House flies",
    "The military",
    "Hollywood elites",
    "Vitamin pills",
    "Mobile networks",
    "Secret labs",
    "Bat soup",
    "Imported parcels",
    "Hand dryers",
    "Saline rinse",
    "Cow urine",
    "Uv lamps",
]

VERBS = [
    "created",
    "causes",
    "cures",
    "spreads",
    "kills",
    "funded",
    "prevents",
    "transmits",
    "stops",
    "triggers",
]

OBJECTS = [
    "the coronavirus",
    "covid infections",
    "lung damage",
    "the outbreak",
    "immunity loss",
    "viral particles",
    "the pandemic",
    "severe sickness",
    "rapid contagion",
    "breathing trouble",
]

BG_NOUNS = [
    "weather", "coffee", "football", "music", "garden", "traffic", "movie",
    "recipe", "holiday", "market", "bicycle", "mountain", "river", "painting",
    "concert", "library", "puppy", "sunset", "breakfast", "keyboard",
]
BG_VERBS = [
    "enjoys", "watches", "visits", "builds", "paints", "reads",
    "plants", "rides", "brews", "sings",
]
BG_EXTRAS = [
    "today", "tonight", "weekend", "morning", "afternoon",
    "slowly", "quickly", "quietly", "happily", "maybe",
]
BG_TAGS = ["#covid19", "#monday", "#weekend", "#music", "#sports"]

CREDIBLE_HANDLES = ["WHO", "ANI", "AFP", "UN", "wef"]

UTC = timezone.utc


def _ts(day: date, seconds: int) -> datetime:
    return datetime(day.year, day.month, day.day, tzinfo=UTC) + timedelta(seconds=seconds)


def _iso(dt: datetime, style: int) -> str:
    if style % 2 == 0:
        return dt.strftime("%Y-%m-%dT%H:%M:%SZ")
    return dt.isoformat()


def _claims(rng: Random) -> list[dict]:
    claims = []
    base = date(2020, 3, 10)
    for i in range(20):
        if i == 18:
            # window deliberately beyond every generated tweet
            text = f"{SUBJECTS[18]} {VERBS[8]} {OBJECTS[8]} claimmark18"
            debunk = date(2021, 6, 1)
        elif i == 19:
            # two content tokens only: its subject/object sets cannot cover
            # the verb cue, enabling a sub-0.95 no-overlap reject
            text = "Garlic cures"
            debunk = base + timedelta(days=9 * 10 + 4)
        else:
            text = f"{SUBJECTS[i]} {VERBS[i % len(VERBS)]} {OBJECTS[i % len(OBJECTS)]} claimmark{i:02d}"
            debunk = base + timedelta(days=9 * i)
        claims.append(
            {
                "id": f"c{i:02d}",
                "text": text,
                "debunk_date": debunk.isoformat(),
                "topic": TOPICS[i % len(TOPICS)],
                "fact_checker": ["TruthDesk", "VerifyNow", "CheckBureau"][i % 3],
                "debunk_url": f"https://www.poynter.org/?ifcn_misinformation=fixture-claim-{i:02d}",
            }
        )
    return claims


def _background_text(rng: Random, i: int) -> str:
    words = [
        rng.choice(BG_NOUNS),
        rng.choice(BG_VERBS),
        rng.choice(BG_NOUNS),
        rng.choice(BG_EXTRAS),
        f"bg{i}word",
    ]
    if rng.random() < 0.3:
        words.append(rng.choice(BG_TAGS))
    if rng.random() < 0.2:
        words.append("https://example.com/p/" + str(rng.randrange(10**6)))
    return " ".join(words)


def build_fixture(dest: str | Path, seed: int = 0) -> dict:
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    rng = Random(seed)
    claims = _claims(rng)
    claim_by_id = {c["id"]: c for c in claims}
    debunk_of = {c["id"]: date.fromisoformat(c["debunk_date"]) for c in claims}

    drafts: list[dict] = []  # {text, kind, created, handle, urls, tag}

    def add(text, kind, created, tag, handle=None, urls=()):
        drafts.append(
            {
                "text": text,
                "kind": kind,
                "created": created,
                "tag": tag,
                "handle": handle or f"user{rng.randrange(100000)}",
                "urls": list(urls),
            }
        )

    for i in range(700):
        day = date(2020, 1, 5) + timedelta(days=rng.randrange(270))
        add(_background_text(rng, i), "SOURCE", _ts(day, rng.randrange(86400)), "background")

    for i in range(90):
        day = date(2020, 2, 1) + timedelta(days=rng.randrange(200))
        kind = ["RETWEET", "REPLY", "QUOTE"][i % 3]
        add("RT " + _background_text(rng, 1000 + i), kind, _ts(day, rng.randrange(86400)), "nonsource")

    plant_claims = [c for c in claims if c["id"] not in ("c18",)]
    for c in plant_claims:
        debunk = debunk_of[c["id"]]
        for j in range(3):
            day = debunk - timedelta(days=rng.randrange(0, 61))
            add(c["text"], "SOURCE", _ts(day, rng.randrange(86400)), f"verbatim:{c['id']}")
        for j in range(2):
            body = c["text"].rsplit(" claimmark", 1)[0] if "claimmark" in c["text"] else c["text"]
            text = f"{body} pad{c['id']}{j}a pad{c['id']}{j}b"
            day = debunk - timedelta(days=rng.randrange(0, 41))
            add(text, "SOURCE", _ts(day, rng.randrange(86400)), f"overlap:{c['id']}")
        day = debunk + timedelta(days=rng.randrange(15, 31))
        add(c["text"], "SOURCE", _ts(day, rng.randrange(86400)), f"outwindow:{c['id']}")

    # temporal boundary plants: exactly -70d (in), +14d (in), -71d (out)
    for cid, offset, tag in (
        ("c00", -70, "edge_in_before"),
        ("c00", 14, "edge_in_after"),
        ("c01", -71, "edge_out_before"),
    ):
        day = debunk_of[cid] + timedelta(days=offset)
        add(claim_by_id[cid]["text"], "SOURCE", _ts(day, 43210), f"{tag}:{cid}")

    for idx, c in enumerate(claims[:15]):
        debunk = debunk_of[c["id"]]
        for j in range(2):
            text = f"Fact check: the claim \"{c['text']}\" is not true"
            day = debunk + timedelta(days=rng.randrange(0, 10))
            url = c["debunk_url"] if idx < 10 else f"https://blogs.example.org/{c['id']}/{j}"
            add(text, "SOURCE", _ts(day, rng.randrange(86400)), f"debunk:{c['id']}", urls=[url])

    for j in range(3):
        day = debunk_of["c19"] - timedelta(days=5 + j)
        add("cures! cures!! cures!!!", "SOURCE", _ts(day, 7200 + j), "reject_no_svo:c19")

    for j, handle in enumerate(CREDIBLE_HANDLES):
        cid = f"c{8 + j:02d}"
        day = debunk_of[cid] - timedelta(days=3 + j)
        add(claim_by_id[cid]["text"], "SOURCE", _ts(day, 3600 * j), f"credible:{cid}", handle=handle)

    rng.shuffle(drafts)
    for n, d in enumerate(drafts):
        d["id"] = f"t{n:05d}"

    ids_by_tag: dict[str, list[str]] = {}
    for d in drafts:
        ids_by_tag.setdefault(d["tag"], []).append(d["id"])

    lines = []
    for n, d in enumerate(drafts):
        rec = {
            "id": d["id"],
            "text": d["text"],
            "author_id": f"a{zlib.crc32(d['handle'].encode('utf-8')) % 10**6}",
            "author_handle": d["handle"],
            "created_at": _iso(d["created"], n),
            "kind": d["kind"],
            "urls": d["urls"],
        }
        lines.append(json.dumps(rec, sort_keys=True, ensure_ascii=False))

    first_id = next(d["id"] for d in drafts if d["kind"] == "SOURCE")
    malformed = [
        "{this is not json",
        json.dumps({"id": "m1", "text": "no timestamp", "kind": "SOURCE"}),
        json.dumps({"id": "m2", "text": "bad kind", "created_at": "2020-04-01T00:00:00Z", "kind": "WEIRD"}),
        json.dumps({"id": "m3", "text": "bad date", "created_at": "not-a-date", "kind": "SOURCE"}),
        json.dumps({"id": "m4", "text": "   ", "created_at": "2020-04-02T00:00:00Z", "kind": "SOURCE"}),
        json.dumps({"id": first_id, "text": "duplicate id", "created_at": "2020-04-03T00:00:00Z", "kind": "SOURCE"}),
    ]
    for pos, line in zip((100, 250, 400, 550, 700, 850), malformed):
        lines.insert(pos, line)

    tweets_path = dest / "tweets.jsonl"
    tweets_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    claims_path = dest / "claims.csv"
    with open(claims_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["id", "text", "debunk_date", "topic", "fact_checker", "debunk_url"]
        )
        writer.writeheader()
        writer.writerows(claims)

    # live statuses: removed verbatim plants (rule b), credible collisions
    # (rule d wins), a handful of background suspensions, unknown ids
    status_rows = [{"snapshot_date": "2021-10-28"}]
    removed_pairs = []
    statuses = ["TWEET_DELETED", "ACCOUNT_SUSPENDED", "ACCOUNT_DELETED"]
    for j, cid in enumerate(f"c{k:02d}" for k in range(2, 8)):
        tid = ids_by_tag[f"verbatim:{cid}"][0]
        status_rows.append({"tweet_id": tid, "status": statuses[j % 3]})
        removed_pairs.append((cid, tid))
    collision_pairs = []
    for cid in ("c08", "c09"):
        tid = ids_by_tag[f"credible:{cid}"][0]
        status_rows.append({"tweet_id": tid, "status": "TWEET_DELETED"})
        collision_pairs.append((cid, tid))
    for k in range(8):
        status_rows.append({"tweet_id": ids_by_tag["background"][k * 7], "status": "ACCOUNT_SUSPENDED"})
    for k in range(2):
        status_rows.append({"tweet_id": ids_by_tag["background"][60 + k], "status": "OTHER"})
    for ghost in ("ghost1", "ghost2", "ghost3"):
        status_rows.append({"tweet_id": ghost, "status": "LIVE"})
    snapshot_path = dest / "status_snapshot.jsonl"
    with open(snapshot_path, "w", encoding="utf-8", newline="\n") as fh:
        for row in status_rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")

    # spread events: in-horizon offsets, boundary (=36h, excluded), beyond
    # horizon, pre-creation (rejected), unknown tweet (rejected)
    event_rows = []
    event_targets = [ids_by_tag[f"verbatim:c{k:02d}"][1] for k in range(8)]
    event_targets += [ids_by_tag["background"][k * 11] for k in range(20)]
    created_by_id = {d["id"]: d["created"] for d in drafts}
    for m, tid in enumerate(event_targets):
        created = created_by_id[tid]
        n_events = rng.randrange(1, 7)
        for e in range(n_events):
            offset = rng.randrange(0, 36 * 3600)
            event_rows.append(
                {
                    "source_tweet_id": tid,
                    "kind": "RETWEET" if (m + e) % 2 == 0 else "QUOTE",
                    "event_time": (created + timedelta(seconds=offset)).isoformat(),
                }
            )
        if m % 5 == 0:
            event_rows.append(
                {
                    "source_tweet_id": tid,
                    "kind": "QUOTE",
                    "event_time": (created + timedelta(hours=36)).isoformat(),
                }
            )
        if m % 7 == 0:
            event_rows.append(
                {
                    "source_tweet_id": tid,
                    "kind": "RETWEET",
                    "event_time": (created + timedelta(hours=40 + m)).isoformat(),
                }
            )
    target0 = event_targets[0]
    event_rows.append(
        {
            "source_tweet_id": target0,
            "kind": "RETWEET",
            "event_time": (created_by_id[target0] - timedelta(seconds=60)).isoformat(),
        }
    )
    event_rows.append(
        {"source_tweet_id": "ghost9", "kind": "QUOTE", "event_time": "2020-05-01T00:00:00+00:00"}
    )
    events_path = dest / "spread_events.jsonl"
    with open(events_path, "w", encoding="utf-8", newline="\n") as fh:
        for row in event_rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")

    # evaluation pairs: one sample per label per claim, plus a few samples
    # the baseline scorer gets wrong so metrics are not trivially perfect
    labeled = []
    for i, c in enumerate(claims):
        labeled.append(
            {"claim_id": c["id"], "claim": c["text"], "text": c["text"] + " spotted again", "label": "MISINFORMATION"}
        )
        labeled.append(
            {
                "claim_id": c["id"],
                "claim": c["text"],
                "text": f"Fact check: \"{c['text']}\" is false",
                "label": "DEBUNK",
            }
        )
        labeled.append(
            {
                "claim_id": c["id"],
                "claim": c["text"],
                "text": f"my cat naps on the windowsill irr{i:02d}",
                "label": "IRRELEVANT",
            }
        )
        if i % 4 == 0:
            labeled.append(
                {
                    "claim_id": c["id"],
                    "claim": c["text"],
                    "text": f"completely different rumor entirely hard{i:02d}",
                    "label": "MISINFORMATION",
                }
            )
    labeled_path = dest / "labeled_pairs.jsonl"
    with open(labeled_path, "w", encoding="utf-8", newline="\n") as fh:
        for row in labeled:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")

    seed_rows = []
    for i in range(9):
        c = claims[i]
        label = ["MISINFORMATION", "DEBUNK", "IRRELEVANT"][i % 3]
        text = {
            "MISINFORMATION": c["text"] + " confirmed by my uncle",
            "DEBUNK": f"this rumor about {c['text'].split()[0].lower()} was debunked",
            "IRRELEVANT": f"lovely picnic by the lake seed{i}",
        }[label]
        seed_rows.append({"id": f"s{i}", "claim": c["text"], "text": text, "label": label})
    seed_path = dest / "seed_annotated.jsonl"
    with open(seed_path, "w", encoding="utf-8", newline="\n") as fh:
        for row in seed_rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")

    stance_rows = []
    for i in range(11):
        c = claims[i % 6]
        stance = ["pos", "neg", "na"][i % 3]
        text = {
            "pos": c["text"] + " share before deleted",
            "neg": f"no, {c['text'].split()[0].lower()} does nothing of the sort",
            "na": f"thinking about dinner options cl{i}",
        }[stance]
        stance_rows.append({"id": f"cl{i}", "misconception": c["text"], "tweet": text, "label": stance})
    stance_rows.append({"id": "clx", "misconception": claims[0]["text"], "tweet": "??", "label": "maybe"})
    covidlies_path = dest / "covidlies.jsonl"
    with open(covidlies_path, "w", encoding="utf-8", newline="\n") as fh:
        for row in stance_rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")

    articles = [
        {
            "debunk_url": claims[0]["debunk_url"],
            "claim": claims[0]["text"],
            "explanation": "There is no evidence linking the named person to the virus; the genome rules out engineering.",
            "article": (
                "A viral post made the rounds last week.\n\n"
                f"The claim circulating online says \"{claims[0]['text']} according to leaked documents\" and has been shared widely.\n\n"
                "Health agencies responded quickly."
            ),
        },
        {
            "debunk_url": claims[1]["debunk_url"],
            "claim": claims[1]["text"],
            "explanation": "Network radiation cannot carry a virus; the two phenomena are physically unrelated.",
            "article": (
                f"Another claim spread on messaging apps: “{claims[1]['text']} say forwarded voice notes” over the weekend.\n\n"
                "Experts dismissed it."
            ),
        },
        {
            "debunk_url": claims[2]["debunk_url"],
            "claim": claims[2]["text"],
            "explanation": "The compound has no antiviral effect at any household dose.",
            "article": (
                "Posts keep resurfacing. \"Completely unrelated quoted sentence here for flavor\" reads one popular reply.\n\n"
                "The claim itself was shared with the short quote \"drink it daily\" attached."
            ),
        },
        {
            "debunk_url": claims[3]["debunk_url"],
            "claim": claims[3]["text"],
            "explanation": "Device shutdowns have no effect on infection rates.",
            "article": (
                f"A widely shared claim asserts \"{claims[3]['text']} within two weeks everywhere\" in several languages.\n\n"
                "Officials issued a correction."
            ),
        },
        {
            "debunk_url": claims[4]["debunk_url"],
            "claim": claims[4]["text"],
            "explanation": "No health authority issued such guidance; the screenshot is fabricated.",
            "article": "Short piece with no quotations at all.",
        },
    ]
    articles_path = dest / "ifcn_articles.jsonl"
    with open(articles_path, "w", encoding="utf-8", newline="\n") as fh:
        for row in articles:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")

    debunk_urls_path = dest / "debunk_urls.txt"
    debunk_urls_path.write_text(
        "# listed fact-check article URLs\n" + "\n".join(c["debunk_url"] for c in claims) + "\n",
        encoding="utf-8",
    )

    annotations = []
    for k, tid in enumerate(ids_by_tag["background"]):
        if k % 13 == 0:
            continue  # leave some unannotated to exercise the OTHER fallback
        annotations.append({"tweet_id": tid, "topic": TOPICS[k % len(TOPICS)]})
    annotations_path = dest / "topic_annotations.jsonl"
    with open(annotations_path, "w", encoding="utf-8", newline="\n") as fh:
        for row in annotations:
            fh.write(json.dumps(row, sort_keys=True) + "\n")

    config = {
        "paths": {
            "tweets": str(tweets_path),
            "claims": str(claims_path),
            "snapshot": str(snapshot_path),
            "events": str(events_path),
            "labeled_pairs": str(labeled_path),
            "seed_annotated": str(seed_path),
            "covidlies": str(covidlies_path),
            "ifcn_articles": str(articles_path),
            "debunk_urls": str(debunk_urls_path),
            "topic_annotations": str(annotations_path),
        },
        "analytics": {"n_comparison": 250},
        "seed": 0,
        "run_dir": str(dest / "run"),
    }
    config_path = dest / "config.json"
    config_path.write_text(json.dumps(config, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    expected = {
        "verbatim": [
            (cid.split(":")[1], tid)
            for cid, tids in ids_by_tag.items()
            if cid.startswith("verbatim:")
            for tid in tids
        ],
        "overlap": [
            (tag.split(":")[1], tid)
            for tag, tids in ids_by_tag.items()
            if tag.startswith("overlap:")
            for tid in tids
        ],
        "outwindow": [
            (tag.split(":")[1], tid)
            for tag, tids in ids_by_tag.items()
            if tag.startswith("outwindow:")
            for tid in tids
        ],
        "reject_no_svo": [("c19", tid) for tid in ids_by_tag.get("reject_no_svo:c19", [])],
        "edge_in": [
            (tag.split(":")[1], tids[0])
            for tag, tids in ids_by_tag.items()
            if tag.startswith("edge_in")
        ],
        "edge_out": [
            (tag.split(":")[1], tids[0])
            for tag, tids in ids_by_tag.items()
            if tag.startswith("edge_out")
        ],
        "debunk": [
            (tag.split(":")[1], tid)
            for tag, tids in ids_by_tag.items()
            if tag.startswith("debunk:")
            for tid in tids
        ],
        "credible": [
            (tag.split(":")[1], tids[0])
            for tag, tids in ids_by_tag.items()
            if tag.startswith("credible:")
        ],
        "rule_b": removed_pairs,
        "collision": collision_pairs,
        "background_ids": ids_by_tag["background"],
    }
    return {
        "dir": dest,
        "config": config_path,
        "tweets": tweets_path,
        "claims": claims_path,
        "snapshot": snapshot_path,
        "events": events_path,
        "labeled_pairs": labeled_path,
        "seed_annotated": seed_path,
        "covidlies": covidlies_path,
        "ifcn_articles": articles_path,
        "debunk_urls": debunk_urls_path,
        "topic_annotations": annotations_path,
        "expected": expected,
    }
