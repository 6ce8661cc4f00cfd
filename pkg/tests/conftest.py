import pytest

from claimsift import synth
from claimsift.config import RunConfig
from claimsift.corpus import ingest_claims, ingest_tweets
from claimsift.pipeline import extract_misinformation, run_all_claims
from claimsift.scorer import BaselineLexicalScorer

ACCEPTANCE_FILE = "test_acceptance.py"


@pytest.fixture(scope="session")
def fixture(tmp_path_factory):
    """The synthetic input set, built once per test session."""
    dest = tmp_path_factory.mktemp("fixture")
    return synth.build_fixture(dest, seed=0)


@pytest.fixture(scope="session")
def corp(fixture):
    return ingest_tweets(fixture["tweets"])


@pytest.fixture(scope="session")
def claims(fixture):
    return ingest_claims(fixture["claims"])


@pytest.fixture(scope="session")
def run_cfg():
    return RunConfig()


@pytest.fixture(scope="session")
def claim_runs(corp, claims, run_cfg):
    return run_all_claims(corp, claims, BaselineLexicalScorer(), run_cfg)


@pytest.fixture(scope="session")
def misinfo(corp, claims, run_cfg, claim_runs):
    return extract_misinformation(
        corp, claims, BaselineLexicalScorer(), run_cfg, claim_runs=claim_runs
    )


def _criterion(nodeid: str) -> str:
    name = nodeid.split("::")[-1]
    return name.removeprefix("test_").replace("_", " ")


def pytest_runtest_logreport(report):
    if ACCEPTANCE_FILE not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        verdict = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        print(f"\n[ACCEPTANCE] {verdict}: {_criterion(report.nodeid)}")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome, verdict in (("passed", "PASS"), ("failed", "FAIL"), ("skipped", "SKIP")):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            when = getattr(rep, "when", "call")
            if ACCEPTANCE_FILE in nodeid and (when == "call" or (when == "setup" and outcome != "passed")):
                lines.append((nodeid, f"[ACCEPTANCE] {verdict}: {_criterion(nodeid)}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
