"""
External scorers over the wire protocol
=======================================

Any HTTP service exposing /score, /embed, and /health with the documented
shapes can replace the built-in baseline scorer. This demo launches the
bundled sidecar service, verifies it with the conformance suite, then runs
the extraction pipeline against it.
"""
import socket
import subprocess
import sys
import tempfile
import time
from importlib.util import find_spec
from pathlib import Path

import requests

from claimsift import synth
from claimsift.config import RunConfig
from claimsift.conformance import run_conformance
from claimsift.corpus import ingest_claims, ingest_tweets
from claimsift.pipeline import collect_misinfo, run_all_claims
from claimsift.scorer import RemoteScorer

if find_spec("neural_scorer_service") is None:
    print("neural_scorer_service is not installed; install it with:")
    print("  pip install -e neural_scorer_service --no-build-isolation")
    sys.exit(1)

# pick a free port and launch the sidecar with its deterministic lexical model
with socket.socket() as probe:
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
proc = subprocess.Popen(
    [sys.executable, "-m", "neural_scorer_service", "--port", str(port)],
    stdout=subprocess.DEVNULL,
    stderr=subprocess.DEVNULL,
)
url = f"http://127.0.0.1:{port}"
try:
    deadline = time.monotonic() + 20
    while True:
        try:
            if requests.get(url + "/health", timeout=1).status_code == 200:
                break
        except requests.RequestException:
            pass
        if time.monotonic() > deadline:
            raise RuntimeError("sidecar did not come up")
        time.sleep(0.2)
    print(f"sidecar listening on {url}")

    # conformance first: ordering, label closure, confidence range, error codes
    report = run_conformance(url)
    print(report.summary())
    if not report.passed:
        sys.exit(1)

    # run the usual funnel, but with pairwise scoring delegated over HTTP
    work = Path(tempfile.mkdtemp(prefix="claimsift_demo_"))
    fixture = synth.build_fixture(work / "fixture", seed=0)
    corpus = ingest_tweets(fixture["tweets"])
    claims = ingest_claims(fixture["claims"])
    remote = RemoteScorer(url)
    runs = run_all_claims(corpus, claims, remote, RunConfig())
    misinfo = collect_misinfo(runs, RunConfig(), "EXTERNAL")
    accepted = sum(r.accepted for r in runs)
    print(f"\nremote scoring: {sum(r.scored for r in runs)} pairs scored, "
          f"{accepted} accepted, {misinfo.manifest['distinct_tweets']} distinct tweets")
finally:
    proc.terminate()
    proc.wait(timeout=5)
