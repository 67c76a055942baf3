"""
Observability Module - structured logging, metrics and rate limiting.

The CLI writes its Report to stdout, so logs go to stderr by default.

Usage:
    from src.observability import setup_logging, get_metrics, setup_rate_limiter
"""

import logging
import os
import sys
from datetime import datetime, timezone
from typing import Dict, Optional, TextIO

# Structured JSON logging
try:
    from pythonjsonlogger import jsonlogger
    JSON_LOGGING_AVAILABLE = True
except ImportError:
    JSON_LOGGING_AVAILABLE = False

SERVICE_NAME = "rootbound"
CONTEXT_FIELDS = ("command", "inputs_digest", "method", "iterations", "latency_ms")

# ============================================================================
# STRUCTURED LOGGING
# ============================================================================

class StructuredJsonFormatter(jsonlogger.JsonFormatter if JSON_LOGGING_AVAILABLE else logging.Formatter):
    """JSON formatter stamping service, level and any command context on each record."""

    def add_fields(self, log_record: Dict, record: logging.LogRecord, message_dict: Dict) -> None:
        super().add_fields(log_record, record, message_dict)

        log_record['timestamp'] = datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")
        log_record['service'] = SERVICE_NAME
        log_record['level'] = record.levelname
        log_record['logger'] = record.name

        for name in CONTEXT_FIELDS:
            if hasattr(record, name):
                log_record[name] = getattr(record, name)


def _parse_level(level) -> int:
    if isinstance(level, int):
        return level
    value = logging.getLevelName(str(level).upper())
    return value if isinstance(value, int) else logging.WARNING


def setup_logging(
    level=logging.WARNING,
    json_format: bool = False,
    log_file: Optional[str] = None,
    stream: Optional[TextIO] = None,
) -> logging.Logger:
    """
    Configure the root logger.

    Args:
        level: logging level or its name
        json_format: use the structured JSON formatter
        log_file: optional file path for file logging
        stream: console stream (default: stderr)
    """
    level = _parse_level(level)
    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    console_handler.setLevel(level)

    if json_format and JSON_LOGGING_AVAILABLE:
        formatter = StructuredJsonFormatter('%(timestamp)s %(level)s %(name)s %(message)s')
    else:
        formatter = logging.Formatter(
            '%(asctime)s [%(levelname)s] %(name)s: %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    return root_logger


# ============================================================================
# PROMETHEUS METRICS
# ============================================================================

class ToolkitMetrics:
    """
    Prometheus metrics for toolkit commands.

    Exposes:
    - Reports by command and exit code
    - Command latency histogram
    - Dense-fallback count of the spectral solver
    - Candidates scored by the extremal search
    """

    def __init__(self):
        self._enabled = False

        try:
            from prometheus_client import Counter, Histogram

            self.reports_total = Counter(
                'rootbound_reports_total',
                'Reports produced, by command and exit code',
                ['command', 'exit_code']
            )

            self.command_latency = Histogram(
                'rootbound_command_latency_seconds',
                'Command latency in seconds',
                ['command'],
                buckets=[0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0, 120.0]
            )

            self.dense_fallbacks = Counter(
                'rootbound_dense_fallbacks_total',
                'Spectral radius computations that needed the dense fallback'
            )

            self.candidates_scored = Counter(
                'rootbound_candidates_scored_total',
                'Candidate matrices scored by the extremal search',
                ['variant']
            )

            self._enabled = True

        except ImportError:
            pass

    @property
    def enabled(self) -> bool:
        return self._enabled

    def record_report(self, command: str, exit_code: int, latency_s: float) -> None:
        if self._enabled:
            self.reports_total.labels(command=command, exit_code=str(exit_code)).inc()
            self.command_latency.labels(command=command).observe(latency_s)

    def record_dense_fallback(self) -> None:
        if self._enabled:
            self.dense_fallbacks.inc()

    def record_candidates(self, variant: str, count: int) -> None:
        if self._enabled:
            self.candidates_scored.labels(variant=variant).inc(count)


# Singleton metrics instance
_metrics: Optional[ToolkitMetrics] = None


def get_metrics() -> ToolkitMetrics:
    """Get or create the metrics singleton."""
    global _metrics
    if _metrics is None:
        _metrics = ToolkitMetrics()
    return _metrics


# ============================================================================
# RATE LIMITING
# ============================================================================

def setup_rate_limiter(app):
    """
    Configure the rate limiter with fail-open behavior.

    Environment Variables:
        RATELIMIT_STORAGE_URI: Redis URI (e.g., "redis://localhost:6379");
                               falls back to "memory://"

    Returns:
        Limiter instance or None if flask-limiter is unavailable
    """
    try:
        from flask_limiter import Limiter
        from flask_limiter.util import get_remote_address

        storage_uri = os.getenv("RATELIMIT_STORAGE_URI", "memory://")

        storage_options = {}
        if storage_uri.startswith("redis://"):
            storage_options = {
                "socket_connect_timeout": 1,
                "socket_timeout": 1,
            }
            logging.info(f"[RATE_LIMIT] Using Redis storage: {storage_uri.split('@')[-1]}")
        else:
            logging.warning(
                "[RATE_LIMIT] Using memory:// - limits NOT shared across workers. "
                "Set RATELIMIT_STORAGE_URI=redis://... for production."
            )

        limiter = Limiter(
            app=app,
            key_func=get_remote_address,
            default_limits=[RATE_LIMITS["api"]],
            storage_uri=storage_uri,
            storage_options=storage_options,
            strategy="fixed-window",
            swallow_errors=True,  # FAIL-OPEN: storage down -> allow request + log
        )

        return limiter

    except ImportError:
        logging.warning("[RATE_LIMIT] flask-limiter not installed, rate limiting disabled")
        return None


# Rate limit constants for endpoint decorators
RATE_LIMITS = {
    "compute": "60 per minute",
    "verify": "5 per minute",
    "health": "exempt",
    "api": "500 per hour"
}


# ============================================================================
# PROMETHEUS ENDPOINT SETUP
# ============================================================================

def setup_prometheus_endpoint(app):
    """Add the /metrics endpoint for Prometheus scraping."""
    try:
        from prometheus_flask_exporter import PrometheusMetrics

        metrics = PrometheusMetrics(app)
        metrics.info('rootbound_app_info', 'Application info', version='1.0')

        return metrics

    except ImportError:
        logging.warning("[OBSERVABILITY] prometheus-flask-exporter not installed")
        return None
