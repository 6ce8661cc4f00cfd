"""Wire-protocol conformance checks for external scorer services.

A service that passes ``run_conformance`` can be swapped in for the bundled
baseline scorer anywhere a PairScorer is accepted: same label closure, same
confidence range, same batch ordering semantics, same error behavior.

The checks are semantics-free. They never assert WHICH label a service
assigns to a probe pair, only that responses are well formed, ordered, and
(when the service declares deterministic mode) repeatable.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

import requests

from .scorer import LABEL_NAMES

log = logging.getLogger(__name__)

PROBE_PAIRS = [
    ("drinking bleach cures the virus", "drinking bleach cures the virus"),
    ("5g towers spread infection", "I repaired a 5g tower today"),
    ("garlic prevents infection", "Fact check: garlic does not prevent anything"),
    ("the outbreak was planned", "nice weather for a picnic"),
    ("el virus fue creado en un laboratorio", "según el informe, no hay pruebas"),
    ("masks cause oxygen loss #masks", "https://example.com totally unrelated @someone"),
]

MALFORMED_SCORE_BODIES = [
    ("empty text", {"claim": "a claim", "text": ""}),
    ("empty claim", {"claim": "", "text": "a tweet"}),
    ("missing text", {"claim": "a claim"}),
    ("wrong types", {"claim": 1, "text": ["x"]}),
    ("empty batch item", [{"claim": "a", "text": "b"}, {"claim": "", "text": ""}]),
]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ConformanceReport:
    base_url: str
    deterministic: bool | None = None
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def summary(self) -> str:
        lines = [f"conformance against {self.base_url}"]
        for r in self.results:
            mark = "PASS" if r.passed else "FAIL"
            lines.append(f"  [{mark}] {r.name}" + (f": {r.detail}" if r.detail else ""))
        return "\n".join(lines)


def _valid_score_payload(payload: object) -> str | None:
    """Return None when payload is a well-formed score response, else a reason."""
    if not isinstance(payload, dict):
        return f"response is {type(payload).__name__}, not an object"
    label = payload.get("label")
    if label not in LABEL_NAMES:
        return f"label {label!r} outside the closed set"
    conf = payload.get("confidence")
    if not isinstance(conf, (int, float)) or isinstance(conf, bool):
        return f"confidence {conf!r} is not numeric"
    if math.isnan(conf) or not 0.0 <= float(conf) <= 1.0:
        return f"confidence {conf!r} outside [0, 1]"
    return None


class _Checker:
    def __init__(self, base_url: str, timeout: float):
        self.base = base_url.rstrip("/")
        self.timeout = timeout
        self.report = ConformanceReport(base_url=self.base)

    def record(self, name: str, passed: bool, detail: str = "") -> None:
        self.report.results.append(CheckResult(name, passed, detail))
        if not passed:
            log.warning("conformance check failed: %s (%s)", name, detail)

    def post(self, path: str, body: object) -> requests.Response:
        return requests.post(
            self.base + path,
            data=json.dumps(body),
            headers={"Content-Type": "application/json"},
            timeout=self.timeout,
        )

    @staticmethod
    def payload_of(resp: requests.Response) -> tuple[object, str | None]:
        try:
            return resp.json(), None
        except ValueError:
            return None, "non-JSON body"

    def check_health(self) -> None:
        try:
            resp = requests.get(self.base + "/health", timeout=self.timeout)
        except requests.RequestException as exc:
            self.record("health reachable", False, str(exc))
            return
        if resp.status_code != 200:
            self.record("health reachable", False, f"status {resp.status_code}")
            return
        try:
            payload = resp.json()
        except ValueError:
            self.record("health reachable", False, "non-JSON body")
            return
        ready = payload.get("ready")
        det = payload.get("deterministic")
        ok = isinstance(ready, bool) and isinstance(det, bool)
        self.record("health shape", ok, "" if ok else f"payload {payload!r}")
        if ok and not ready:
            self.record("health ready", False, "service reports unready")
        elif ok:
            self.record("health ready", True)
            self.report.deterministic = det

    def check_single_scores(self) -> None:
        for claim, text in PROBE_PAIRS:
            try:
                resp = self.post("/score", {"claim": claim, "text": text})
            except requests.RequestException as exc:
                self.record("score single", False, str(exc))
                return
            if resp.status_code != 200:
                self.record("score single", False, f"status {resp.status_code} for {claim!r}")
                return
            payload, err = self.payload_of(resp)
            reason = err or _valid_score_payload(payload)
            if reason:
                self.record("score payload", False, reason)
                return
        self.record("score single", True)
        self.record("score payload", True)

    def check_batch(self) -> None:
        batch = [{"claim": c, "text": t} for c, t in PROBE_PAIRS[:3]]
        try:
            resp = self.post("/score", batch)
        except requests.RequestException as exc:
            self.record("score batch", False, str(exc))
            return
        if resp.status_code != 200:
            self.record("score batch", False, f"status {resp.status_code}")
            return
        payload, err = self.payload_of(resp)
        if err:
            self.record("score batch", False, err)
            return
        if not isinstance(payload, list) or len(payload) != len(batch):
            self.record("score batch", False, f"expected {len(batch)} responses, got {payload!r}")
            return
        bad = next(filter(None, (_valid_score_payload(p) for p in payload)), None)
        if bad:
            self.record("score batch", False, bad)
            return
        self.record("score batch", True)
        if self.report.deterministic:
            # order preservation is only externally observable when repeat
            # calls are stable: batch[i] must equal the single-call response
            try:
                singles = []
                for item in batch:
                    single, err = self.payload_of(self.post("/score", item))
                    if err:
                        self.record("batch ordering", False, err)
                        return
                    singles.append(single)
            except requests.RequestException as exc:
                self.record("batch ordering", False, str(exc))
                return
            ok = payload == singles
            self.record("batch ordering", ok, "" if ok else "batch responses diverge from singles")

    def check_determinism(self) -> None:
        if not self.report.deterministic:
            self.record("determinism", True, "service does not declare deterministic mode")
            return
        claim, text = PROBE_PAIRS[0]
        try:
            first, err1 = self.payload_of(self.post("/score", {"claim": claim, "text": text}))
            second, err2 = self.payload_of(self.post("/score", {"claim": claim, "text": text}))
        except requests.RequestException as exc:
            self.record("determinism", False, str(exc))
            return
        if err1 or err2:
            self.record("determinism", False, err1 or err2)
            return
        ok = first == second
        self.record("determinism", ok, "" if ok else f"{first!r} != {second!r}")

    def check_error_codes(self) -> None:
        for name, body in MALFORMED_SCORE_BODIES:
            try:
                resp = self.post("/score", body)
            except requests.RequestException as exc:
                self.record("error codes", False, f"{name}: {exc}")
                return
            if not 400 <= resp.status_code < 500:
                self.record("error codes", False, f"{name}: status {resp.status_code}, wanted 4xx")
                return
        try:
            resp = requests.post(
                self.base + "/score",
                data=b"{not json",
                headers={"Content-Type": "application/json"},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            self.record("error codes", False, f"non-JSON body: {exc}")
            return
        if not 400 <= resp.status_code < 500:
            self.record("error codes", False, f"non-JSON body: status {resp.status_code}")
            return
        self.record("error codes", True)

    def check_embed(self) -> None:
        dims = []
        for text in ("a first probe sentence", "another, rather different, probe"):
            try:
                resp = self.post("/embed", {"text": text})
            except requests.RequestException as exc:
                self.record("embed", False, str(exc))
                return
            if resp.status_code != 200:
                self.record("embed", False, f"status {resp.status_code}")
                return
            payload, err = self.payload_of(resp)
            if err:
                self.record("embed", False, err)
                return
            vec = payload.get("vector") if isinstance(payload, dict) else None
            if not isinstance(vec, list) or not vec:
                self.record("embed", False, f"malformed payload {payload!r}")
                return
            if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vec):
                self.record("embed", False, "non-numeric vector entries")
                return
            norm = math.sqrt(sum(float(v) ** 2 for v in vec))
            if abs(norm - 1.0) > 1e-6:
                self.record("embed", False, f"vector norm {norm} is not 1")
                return
            dims.append(len(vec))
        if dims[0] != dims[1]:
            self.record("embed", False, f"dimension varies across texts: {dims}")
            return
        self.record("embed", True)
        try:
            resp = self.post("/embed", {"nope": 1})
        except requests.RequestException as exc:
            self.record("embed error codes", False, str(exc))
            return
        ok = 400 <= resp.status_code < 500
        self.record("embed error codes", ok, "" if ok else f"status {resp.status_code}")


def run_conformance(base_url: str, timeout: float = 10.0) -> ConformanceReport:
    """Run every protocol check against a live service; never raises on failures."""
    checker = _Checker(base_url, timeout)
    checker.check_health()
    if checker.report.passed:
        checker.check_single_scores()
        checker.check_batch()
        checker.check_determinism()
        checker.check_error_codes()
        checker.check_embed()
    return checker.report
