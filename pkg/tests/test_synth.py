from claimsift.synth import build_fixture

PATH_KEYS = [
    "tweets",
    "claims",
    "snapshot",
    "events",
    "labeled_pairs",
    "seed_annotated",
    "covidlies",
    "ifcn_articles",
    "debunk_urls",
    "topic_annotations",
    "config",
]


class TestBuildFixture:
    def test_all_files_written(self, fixture):
        for key in PATH_KEYS:
            assert fixture[key].is_file(), key

    def test_rebuild_is_byte_identical(self, tmp_path):
        a = build_fixture(tmp_path / "a")
        b = build_fixture(tmp_path / "b")
        for key in PATH_KEYS:
            if key == "config":
                continue  # embeds absolute paths; compared below after rewrite
            assert a[key].read_bytes() == b[key].read_bytes(), key
        cfg_a = a["config"].read_text(encoding="utf-8").replace(str(a["dir"]), "DIR")
        cfg_b = b["config"].read_text(encoding="utf-8").replace(str(b["dir"]), "DIR")
        assert cfg_a == cfg_b
        assert a["expected"] == b["expected"]

    def test_seed_changes_content(self, tmp_path):
        a = build_fixture(tmp_path / "a", seed=0)
        b = build_fixture(tmp_path / "b", seed=1)
        assert a["tweets"].read_bytes() != b["tweets"].read_bytes()

    def test_tweet_line_count(self, fixture):
        lines = fixture["tweets"].read_text(encoding="utf-8").splitlines()
        assert len(lines) == 951

    def test_expected_group_sizes(self, fixture):
        exp = fixture["expected"]
        sizes = {k: len(v) for k, v in exp.items()}
        assert sizes == {
            "verbatim": 57,
            "overlap": 38,
            "outwindow": 19,
            "reject_no_svo": 3,
            "edge_in": 2,
            "edge_out": 1,
            "debunk": 30,
            "credible": 5,
            "rule_b": 6,
            "collision": 2,
            "background_ids": 700,
        }

    def test_planted_pair_groups_disjoint(self, fixture):
        exp = fixture["expected"]
        pair_groups = [
            "verbatim",
            "overlap",
            "outwindow",
            "reject_no_svo",
            "edge_in",
            "edge_out",
            "debunk",
            "credible",
        ]
        seen = set()
        for group in pair_groups:
            pairs = set(exp[group])
            assert not pairs & seen, group
            seen |= pairs

    def test_claim_count(self, fixture):
        lines = fixture["claims"].read_text(encoding="utf-8").splitlines()
        # CSV header plus one record per claim
        assert len([ln for ln in lines if ln.strip()]) == 21
        assert lines[0].startswith("id,")
