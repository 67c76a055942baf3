"""
Report assembly and canonical JSON.

Every command produces {command, inputs_digest, result, warnings}. Output
is deterministic: keys are sorted, floats use the shortest repr that
round-trips (at most 17 significant digits), infinities print as the string
"infinity" and NaN as null.
"""

import hashlib
import json
import logging
import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional

import numpy as np

REPORT_KEYS = ("command", "inputs_digest", "result", "warnings")
INFINITY = "infinity"


def _float(x: float) -> Any:
    if math.isnan(x):
        return None
    if math.isinf(x):
        return INFINITY if x > 0 else "-" + INFINITY
    return x


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy values, enums and report objects into plain JSON types."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, Enum):
        return to_jsonable(obj.value)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj: Any, indent: Optional[int] = None) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=indent, allow_nan=False)


def inputs_digest(command: str, inputs: Dict[str, Any], settings: Dict[str, Any]) -> str:
    """sha256 over the command, its inputs and the numeric settings in effect."""
    payload = canonical_json({"command": command, "inputs": inputs, "settings": settings})
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class Report:
    command: str
    inputs_digest: str
    result: Dict[str, Any]
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "result": to_jsonable(self.result),
            "warnings": list(self.warnings),
        }

    def to_json(self, indent: int = 2) -> str:
        return canonical_json(self.to_dict(), indent=indent)


# ============================================================================
# WARNING CAPTURE
# ============================================================================

class _WarningCollector(logging.Handler):
    """Collects WARNING+ messages emitted on one thread."""

    def __init__(self, thread_id: int):
        super().__init__(level=logging.WARNING)
        self.thread_id = thread_id
        self.messages: List[str] = []

    def emit(self, record: logging.LogRecord) -> None:
        if record.thread != self.thread_id:
            return
        message = record.getMessage()
        if message not in self.messages:
            self.messages.append(message)


@contextmanager
def capture_warnings(logger_name: str = "src") -> Iterator[List[str]]:
    """
    Route library warnings into the report.

    The package logger is opened to WARNING for the duration so a quieter
    --log-level does not drop report warnings; console handlers keep their
    own level.
    """
    target = logging.getLogger(logger_name)
    collector = _WarningCollector(threading.get_ident())
    previous = target.level
    if target.getEffectiveLevel() > logging.WARNING:
        target.setLevel(logging.WARNING)
    target.addHandler(collector)
    try:
        yield collector.messages
    finally:
        target.removeHandler(collector)
        target.setLevel(previous)
