"""
Settings Manager - toolkit defaults, JSON overrides and environment overrides.

Resolution order (later wins):
    1. DEFAULT_SETTINGS below
    2. config/toolkit_settings.json (deep-merged; missing or corrupt file -> defaults)
    3. ROOTBOUND_* environment variables
    4. CLI global flags (applied by the caller through ToolkitSettings.replace)
"""

import copy
import json
import logging
import os
from dataclasses import dataclass, replace
from typing import Any, Callable, Dict, Optional

logger = logging.getLogger(__name__)

BASE_DIR = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
CONFIG_DIR = os.path.join(BASE_DIR, "config")
SETTINGS_FILE = os.path.join(CONFIG_DIR, "toolkit_settings.json")
SCHEMA_VERSION = "1.0"

DEFAULT_SETTINGS: Dict[str, Any] = {
    "spectral": {
        "tol": 1e-12,
        "max_iter": 1_000_000,
        "stall_window": 200,
        "stall_factor": 0.999,
        "dense_max_order": 512,
    },
    "bounds": {
        "equitable_rel_tol": 1e-9,
        "eigenvector_zero_tol": 1e-10,
        "rooted_abs_tol": 1e-12,
    },
    "extremal": {
        "budget": 1_000_000,
        "tie_tol": 1e-10,
        "workers": 1,
    },
    "cli": {
        "seed": 20240501,
        "schema_version": SCHEMA_VERSION,
    },
    "logging": {
        "level": "WARNING",
        "json": False,
    },
}

_BOOL_TRUE = {"1", "true", "yes", "on"}

# env var -> (section, key, parser)
ENV_OVERRIDES: Dict[str, tuple] = {
    "ROOTBOUND_TOL": ("spectral", "tol", float),
    "ROOTBOUND_MAX_ITER": ("spectral", "max_iter", int),
    "ROOTBOUND_SEED": ("cli", "seed", int),
    "ROOTBOUND_BUDGET": ("extremal", "budget", int),
    "ROOTBOUND_WORKERS": ("extremal", "workers", int),
    "ROOTBOUND_LOG_LEVEL": ("logging", "level", str.upper),
    "ROOTBOUND_JSON_LOGS": ("logging", "json", lambda v: v.strip().lower() in _BOOL_TRUE),
}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _load_settings(path: str) -> Dict[str, Any]:
    if not os.path.exists(path):
        return copy.deepcopy(DEFAULT_SETTINGS)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise ValueError("settings root must be an object")
        return _deep_merge(DEFAULT_SETTINGS, data)
    except (json.JSONDecodeError, IOError, ValueError) as e:
        logger.warning(f"[CONFIG] Could not read {path} ({e}); using defaults")
        return copy.deepcopy(DEFAULT_SETTINGS)


def _apply_env(settings: Dict[str, Any], environ: Dict[str, str]) -> Dict[str, Any]:
    for name, (section, key, parse) in ENV_OVERRIDES.items():
        raw = environ.get(name)
        if raw is None or raw == "":
            continue
        try:
            settings[section][key] = parse(raw)
        except ValueError:
            logger.warning(f"[CONFIG] Ignoring {name}={raw!r}: not a valid value")
    return settings


@dataclass(frozen=True)
class ToolkitSettings:
    """Flat read-only view of the settings used at runtime."""

    tol: float
    max_iter: int
    seed: int
    budget: int
    workers: int
    tie_tol: float
    log_level: str
    json_logs: bool
    schema_version: str

    def replace(self, **changes: Any) -> "ToolkitSettings":
        """Copy with the non-None changes applied (CLI flag overrides)."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tol": self.tol,
            "max_iter": self.max_iter,
            "seed": self.seed,
            "budget": self.budget,
            "workers": self.workers,
            "tie_tol": self.tie_tol,
        }


class SettingsManager:
    """Loads and exposes toolkit settings."""

    def __init__(self, path: str = SETTINGS_FILE, environ: Optional[Dict[str, str]] = None):
        self.path = path
        self.environ = dict(os.environ) if environ is None else environ
        self.settings = _apply_env(_load_settings(path), self.environ)

    def reload(self) -> None:
        self.settings = _apply_env(_load_settings(self.path), self.environ)

    def get(self, section: str, key: str, default: Any = None) -> Any:
        return self.settings.get(section, {}).get(key, default)

    def toolkit(self) -> ToolkitSettings:
        s = self.settings
        return ToolkitSettings(
            tol=float(s["spectral"]["tol"]),
            max_iter=int(s["spectral"]["max_iter"]),
            seed=int(s["cli"]["seed"]),
            budget=int(s["extremal"]["budget"]),
            workers=int(s["extremal"]["workers"]),
            tie_tol=float(s["extremal"]["tie_tol"]),
            log_level=str(s["logging"]["level"]),
            json_logs=bool(s["logging"]["json"]),
            schema_version=str(s["cli"]["schema_version"]),
        )


# Global instance
_settings_manager: Optional[SettingsManager] = None


def get_settings_manager() -> SettingsManager:
    """Get or create the global settings manager instance."""
    global _settings_manager
    if _settings_manager is None:
        _settings_manager = SettingsManager()
    return _settings_manager


def get_settings() -> ToolkitSettings:
    return get_settings_manager().toolkit()


def reset_settings_manager() -> None:
    global _settings_manager
    _settings_manager = None
