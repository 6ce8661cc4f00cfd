"""CLI entry point: mount a model and serve the wire protocol."""
import argparse
import logging
import sys

from .models import build_model
from .service import ScorerService

log = logging.getLogger("neural_scorer_service")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="neural-scorer-service",
        description="Serve a pairwise claim/text classifier and sentence embedder over HTTP.",
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8230)
    parser.add_argument(
        "--model",
        default="lexical",
        help="'lexical' (default, deterministic) or 'transformer:<checkpoint>'",
    )
    parser.add_argument("--max-in-flight", type=int, default=8)
    parser.add_argument("--log-level", default="INFO")
    args = parser.parse_args(argv)

    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s %(message)s")
    try:
        model = build_model(args.model)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    model.load()
    if not model.ready:
        # keep serving: /health reports the condition and scoring returns 503
        log.warning("model %s failed to load: %s", model.name, getattr(model, "error", ""))

    service = ScorerService(model, host=args.host, port=args.port, max_in_flight=args.max_in_flight)
    log.info("model %s (deterministic=%s) listening on %s", model.name, model.deterministic, service.url)
    try:
        service.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        service.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
