"""
RootBound HTTP JSON API - Flask Backend

Every endpoint runs the same execute(command, inputs) as the CLI, so a
request body carries exactly the CLI inputs: matrices as nested lists,
partitions as {"n": ..., "blocks": [[...], ...]} with 1-based indices.

RESPONSES:
    200  the Report {command, inputs_digest, result, warnings}
    400  {"success": false, "error": "..."} for malformed input
    422  the Report when a bound or certificate is not established
    500  {"success": false, "error": "..."} when an internal cross-check fails

Identical requests are answered from the report cache for an hour.
"""

import logging
import os
from typing import Any, Dict, Tuple

from flask import Flask, jsonify, request

from src.cli.handlers import EXIT_NOT_ESTABLISHED, commands, execute
from src.config.settings import get_settings
from src.core.errors import InputError, RootBoundError

# Import observability
try:
    from src.observability import setup_logging, setup_rate_limiter, setup_prometheus_endpoint, RATE_LIMITS
    OBSERVABILITY_AVAILABLE = True
except ImportError:
    OBSERVABILITY_AVAILABLE = False

_settings = get_settings()

# Configure logging (use structured logging if available)
if OBSERVABILITY_AVAILABLE:
    setup_logging(level=logging.INFO, json_format=_settings.json_logs)
else:
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s [%(levelname)s] %(name)s: %(message)s'
    )
logger = logging.getLogger(__name__)

# Initialize Flask app
app = Flask(__name__)

# Setup Prometheus metrics endpoint
prometheus_metrics = None
if OBSERVABILITY_AVAILABLE:
    prometheus_metrics = setup_prometheus_endpoint(app)
    if prometheus_metrics:
        logger.info("[API] Prometheus metrics enabled at /metrics")

# Setup rate limiting
limiter = None
if OBSERVABILITY_AVAILABLE:
    limiter = setup_rate_limiter(app)
    if limiter:
        logger.info("[API] Rate limiting enabled")


def rate_limited(kind: str):
    """Apply RATE_LIMITS[kind] when the limiter is available."""
    def decorate(view):
        if limiter is None:
            return view
        return limiter.limit(RATE_LIMITS[kind])(view)
    return decorate


VERIFY_VARIANTS = ("conjecture-c", "zero-trace")


def _body() -> Dict[str, Any]:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise InputError("request body must be a JSON object")
    return data


def _respond(command: str, inputs: Dict[str, Any]) -> Tuple[Any, int]:
    try:
        report, exit_code = execute(command, inputs, _settings, use_cache=True)
    except InputError as e:
        logger.info(f"[API] {command}: input error: {e}")
        return jsonify({"success": False, "error": str(e)}), 400
    except RootBoundError as e:
        logger.error(f"[API] {command}: internal check failed: {e}", exc_info=True)
        return jsonify({"success": False, "error": "internal consistency check failed"}), 500

    status = 422 if exit_code == EXIT_NOT_ESTABLISHED else 200
    return jsonify(report.to_dict()), status


def _compute(command: str) -> Tuple[Any, int]:
    try:
        inputs = _body()
    except InputError as e:
        return jsonify({"success": False, "error": str(e)}), 400
    return _respond(command, inputs)


@app.route("/", methods=["GET"])
def api_info():
    """Return API information."""
    return jsonify({
        "name": "RootBound API",
        "version": _settings.schema_version,
        "description": "Certified spectral-radius bounds and extremal (0,1)-matrix search",
        "endpoints": {
            "spectral_radius": "POST /api/spectral/radius",
            "rho_r": "POST /api/spectral/rho-r",
            "rooted_check": "POST /api/rooted-check",
            "quotient": "POST /api/quotient",
            "bound_upper": "POST /api/bound/upper",
            "bound_lower": "POST /api/bound/lower",
            "duan_zhou": "POST /api/bound/duan-zhou",
            "entry_sum": "POST /api/bound/entry-sum",
            "construct_a0": "POST /api/construct/a0",
            "verify": "POST /api/verify (rate limited)",
            "health": "GET /health",
        },
        "commands": commands(),
    })


@app.route("/api/spectral/radius", methods=["POST"])
@rate_limited("compute")
def spectral_radius():
    return _compute("spectral radius")


@app.route("/api/spectral/rho-r", methods=["POST"])
@rate_limited("compute")
def spectral_rho_r():
    return _compute("spectral rho-r")


@app.route("/api/rooted-check", methods=["POST"])
@rate_limited("compute")
def rooted_check():
    return _compute("rooted-check")


@app.route("/api/quotient", methods=["POST"])
@rate_limited("compute")
def quotient():
    return _compute("quotient")


@app.route("/api/bound/upper", methods=["POST"])
@rate_limited("compute")
def bound_upper():
    return _compute("bound upper")


@app.route("/api/bound/lower", methods=["POST"])
@rate_limited("compute")
def bound_lower():
    return _compute("bound lower")


@app.route("/api/bound/duan-zhou", methods=["POST"])
@rate_limited("compute")
def bound_duan_zhou():
    return _compute("bound duan-zhou")


@app.route("/api/bound/entry-sum", methods=["POST"])
@rate_limited("compute")
def bound_entry_sum():
    return _compute("bound entry-sum")


@app.route("/api/construct/a0", methods=["POST"])
@rate_limited("compute")
def construct_a0():
    return _compute("construct a0")


@app.route("/api/verify", methods=["POST"])
@rate_limited("verify")
def verify():
    """
    Exhaustive staircase search.

    Expects JSON: {"variant": "conjecture-c" | "zero-trace", "n": 4, "e": 6,
                   "budget": ..., "full": false, "check_bound": false}
    """
    try:
        inputs = _body()
    except InputError as e:
        return jsonify({"success": False, "error": str(e)}), 400

    variant = inputs.pop("variant", "conjecture-c")
    if variant not in VERIFY_VARIANTS:
        return jsonify({"success": False, "error": f"variant must be one of {list(VERIFY_VARIANTS)}"}), 400
    inputs["progress"] = False
    return _respond(f"verify {variant}", inputs)


@app.route("/health/live", methods=["GET"])
@app.route("/health", methods=["GET"])
def liveness_check():
    """Liveness probe - always 200 while Flask is responding."""
    return jsonify({"status": "alive"}), 200


@app.route("/health/ready", methods=["GET"])
def readiness_check():
    """Readiness probe - ready once every command handler is registered."""
    available = commands()
    if not available:
        return jsonify({"status": "not_ready", "reason": "no command handlers registered"}), 503
    return jsonify({"status": "ready", "commands": len(available)}), 200


if limiter is not None:
    for _view in (liveness_check, readiness_check):
        limiter.exempt(_view)


def main():
    """
    Development entry point.

    Environment Variables:
        FLASK_DEBUG: Set to 'true' to enable debug mode (default: False)
        PORT: Server port (default: 5000)
    """
    debug_mode = os.getenv('FLASK_DEBUG', 'False').lower() == 'true'
    port = int(os.getenv('PORT', 5000))

    logger.info(f"[API] Serving on http://127.0.0.1:{port} (debug={'on' if debug_mode else 'off'})")
    if not debug_mode:
        logger.info("[API] For production, use 'gunicorn wsgi:app'")

    app.run(debug=debug_mode, host="0.0.0.0", port=port)


if __name__ == "__main__":
    main()
