"""JSON-over-HTTP wrapper around a pair classification model.

Endpoints: POST /score (single object or batch list), POST /embed, GET
/health. Malformed requests get a 4xx with a message; scoring against an
unready model gets a 503. Request handling is threaded; model inference is
serialized behind a lock and total in-flight work is bounded by a semaphore.
"""
from __future__ import annotations

import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

log = logging.getLogger("neural_scorer_service")


def _validate_pair(item: object) -> str | None:
    if not isinstance(item, dict):
        return f"expected an object, got {type(item).__name__}"
    for key in ("claim", "text"):
        value = item.get(key)
        if not isinstance(value, str) or not value.strip():
            return f"field {key!r} must be a non-empty string"
    return None


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):
        log.debug("%s " + fmt, self.address_string(), *args)

    def _reply(self, status: int, payload: object) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _read_json(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return None, "empty request body"
        try:
            return json.loads(raw.decode("utf-8")), None
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            return None, f"request body is not valid JSON: {exc}"

    def do_GET(self):
        if self.path != "/health":
            self._reply(404, {"error": f"no such endpoint {self.path}"})
            return
        model = self.server.model
        self._reply(200, {"ready": bool(model.ready), "deterministic": bool(model.deterministic)})

    def do_POST(self):
        if self.path not in ("/score", "/embed"):
            self._reply(404, {"error": f"no such endpoint {self.path}"})
            return
        payload, err = self._read_json()
        if err:
            self._reply(400, {"error": err})
            return
        with self.server.in_flight:
            if self.path == "/score":
                self._handle_score(payload)
            else:
                self._handle_embed(payload)

    def _handle_score(self, payload) -> None:
        if isinstance(payload, list):
            if not payload:
                self._reply(400, {"error": "batch must not be empty"})
                return
            items, batched = payload, True
        else:
            items, batched = [payload], False
        for i, item in enumerate(items):
            problem = _validate_pair(item)
            if problem:
                where = f"batch item {i}: " if batched else ""
                self._reply(400, {"error": where + problem})
                return
        if not self.server.model.ready:
            self._reply(503, {"error": "model is not ready"})
            return
        pairs = [(item["claim"], item["text"]) for item in items]
        with self.server.inference_lock:
            scored = self.server.model.classify(pairs)
        responses = [{"label": label, "confidence": conf} for label, conf in scored]
        self._reply(200, responses if batched else responses[0])

    def _handle_embed(self, payload) -> None:
        if not isinstance(payload, dict):
            self._reply(400, {"error": f"expected an object, got {type(payload).__name__}"})
            return
        text = payload.get("text")
        if not isinstance(text, str) or not text.strip():
            self._reply(400, {"error": "field 'text' must be a non-empty string"})
            return
        if not self.server.model.ready:
            self._reply(503, {"error": "model is not ready"})
            return
        with self.server.inference_lock:
            vector = self.server.model.embed(text)
        self._reply(200, {"vector": vector})


class _Server(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, model, max_in_flight: int):
        super().__init__(address, _Handler)
        self.model = model
        self.inference_lock = threading.Lock()
        self.in_flight = threading.Semaphore(max_in_flight)


class ScorerService:
    """Owns the server socket; usable as a context manager in tests or
    driven by serve_forever() from the CLI."""

    def __init__(self, model, host: str = "127.0.0.1", port: int = 0, max_in_flight: int = 8):
        if max_in_flight < 1:
            raise ValueError(f"max_in_flight must be >= 1, got {max_in_flight}")
        self.model = model
        self._server = _Server((host, port), model, max_in_flight)
        self._thread: threading.Thread | None = None

    @property
    def url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "ScorerService":
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def serve_forever(self) -> None:
        self._server.serve_forever()

    def close(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

    def __enter__(self) -> "ScorerService":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.close()
