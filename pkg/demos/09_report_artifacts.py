"""
One-command report runs and byte-stable artifacts
=================================================

The report command chains ingest, index, extraction, enrichment, evaluation,
analytics, and language statistics into one run directory with a manifest of
input and artifact digests. Same config and inputs give byte-identical
artifacts, which the demo verifies by running twice.
"""
import hashlib
import json
import tempfile
from pathlib import Path

from claimsift import synth
from claimsift.cli import main

work = Path(tempfile.mkdtemp(prefix="claimsift_demo_"))
fixture = synth.build_fixture(work / "fixture", seed=0)

run_a = work / "run_a"
rc = main(["report", "--config", str(fixture["config"]), "--run-dir", str(run_a)])
assert rc == 0
print(f"report finished under {run_a}\n")

manifest = json.loads((run_a / "manifest.json").read_text())
print(f"config hash: {manifest['config_hash']}")
print(f"{len(manifest['artifacts'])} artifacts:")
for rel in sorted(manifest["artifacts"]):
    print(f"  {rel}")

# digests in the manifest match the bytes on disk
for rel, digest in manifest["artifacts"].items():
    actual = hashlib.sha256((run_a / rel).read_bytes()).hexdigest()
    assert actual == digest, rel
print("\nall artifact digests verified")

# a second run from the same config and inputs is byte-identical
run_b = work / "run_b"
assert main(["report", "--config", str(fixture["config"]), "--run-dir", str(run_b)]) == 0
diffs = [
    rel
    for rel in manifest["artifacts"]
    if (run_a / rel).read_bytes() != (run_b / rel).read_bytes()
]
assert not diffs, diffs
print("second run is byte-identical")

# headline numbers from the run
metrics = json.loads((run_a / "evaluation" / "metrics.json").read_text())
print(f"\nevaluation: accuracy {metrics['accuracy']:.4f}, macro F1 {metrics['macro_f1']:.4f}")
extraction = json.loads((run_a / "extraction" / "manifest.json").read_text())
print(f"extraction: {extraction['total_pairs']} pairs across {len(extraction['claims'])} claims")
