"""
Command handlers shared by the CLI and the HTTP API.

FLOW:
    execute(command, inputs)
        1. digest = sha256(command, inputs, numeric settings)
        2. optional TTL cache lookup (HTTP API only)
        3. dispatch to the registered handler with library warnings captured
        4. HypothesisError (incl. NotRootedError, CertificateError)
           -> failure result, exit code 2
        5. InputError and internal errors propagate to the caller

Inputs are plain JSON values: matrices as nested lists, partitions as the
Partition JSON object {"n": ..., "blocks": [[...], ...]} with 1-based indices.
"""

import logging
import time
from threading import Lock
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from cachetools import TTLCache

from src.bounds.comparison import rooted_comparison
from src.bounds.families import (
    MnParams,
    best_duan_zhou,
    duan_zhou_bound,
    entrysum_bound,
    mn_matrix,
    mn_rho_closed_form,
    refined_duan_zhou,
    stanley_bound,
    stanley_bound_exact,
)
from src.bounds.sweeps import run_suite
from src.bounds.theorem import BoundDirection, lower_bound, upper_bound
from src.cli.reports import INFINITY, Report, capture_warnings, inputs_digest, to_jsonable
from src.config.settings import ToolkitSettings, get_settings
from src.core.errors import CertificateError, DimensionError, HypothesisError, InputError
from src.core.matrix import as_matrix, as_square, is_equitable
from src.core.partition import Partition
from src.extremal.constructions import ExtremalParams, construct_a0, construct_a0_prime, small_t_extremal
from src.extremal.polynomials import conjecture_polynomials, quotient_matrices_6_1
from src.extremal.search import verify_conjecture
from src.extremal.staircase import block_statistics, check_proof_bound
from src.observability import get_metrics
from src.rooted.rooted import check_rooted_matrix
from src.spectral.dense import dense_eigenvalues
from src.spectral.power import SpectralMethod, left_eigenvector_nonneg, spectral_radius_nonneg
from src.spectral.rho_r import reduce_by_transpose_quotient, rho_r_general, rho_r_rooted

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_ESTABLISHED = 2
EXIT_INTERNAL = 3

FAILURE_KEYS = ("established", "hypothesis_ok", "error", "check")

# ============================================================================
# REPORT CACHE
# ============================================================================
# Identical HTTP requests are answered from here for an hour
REPORT_CACHE = TTLCache(maxsize=256, ttl=3600)
CACHE_LOCK = Lock()

Handler = Callable[[Dict[str, Any], ToolkitSettings], Dict[str, Any]]
HANDLERS: Dict[str, Handler] = {}


def handler(command: str) -> Callable[[Handler], Handler]:
    def register(fn: Handler) -> Handler:
        HANDLERS[command] = fn
        return fn
    return register


# ============================================================================
# INPUT HELPERS
# ============================================================================

_MISSING = object()


def _get(inputs: Dict[str, Any], key: str, default: Any = _MISSING) -> Any:
    value = inputs.get(key)
    if value is None:
        if default is _MISSING:
            raise InputError(f"missing required input {key!r}")
        return default
    return value


def _int(inputs: Dict[str, Any], key: str, default: Any = _MISSING) -> int:
    value = _get(inputs, key, default)
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        if isinstance(value, str):
            try:
                return int(value.strip())
            except ValueError:
                pass
        raise InputError(f"{key!r} must be an integer, got {value!r}")
    return int(value)


def _float(inputs: Dict[str, Any], key: str) -> float:
    value = _get(inputs, key)
    try:
        return float(value)
    except (TypeError, ValueError):
        raise InputError(f"{key!r} must be a real number, got {value!r}")


def _bool(inputs: Dict[str, Any], key: str) -> bool:
    return bool(inputs.get(key) or False)


def _square(inputs: Dict[str, Any], key: str, name: str) -> np.ndarray:
    return as_square(_get(inputs, key), name)


def _partition(inputs: Dict[str, Any], key: str = "partition") -> Partition:
    value = _get(inputs, key)
    if isinstance(value, Partition):
        return value
    return Partition.from_dict(value)


def _direction(inputs: Dict[str, Any]) -> BoundDirection:
    value = inputs.get("direction") or BoundDirection.UPPER.value
    try:
        return BoundDirection(value)
    except ValueError:
        raise InputError(f"direction must be 'upper' or 'lower', got {value!r}")


def _rho_value(value: Optional[float]) -> Any:
    return INFINITY if value is None else value


# ============================================================================
# SPECTRAL
# ============================================================================

@handler("spectral radius")
def spectral_radius(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    res = spectral_radius_nonneg(_square(inputs, "matrix", "C"), settings.tol, settings.max_iter)
    if res.method is SpectralMethod.DENSE_FALLBACK:
        get_metrics().record_dense_fallback()
    return res.to_dict()


@handler("spectral left")
def spectral_left(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    res = left_eigenvector_nonneg(_square(inputs, "matrix", "C"), settings.tol, settings.max_iter)
    if res.method is SpectralMethod.DENSE_FALLBACK:
        get_metrics().record_dense_fallback()
    return res.to_dict()


@handler("spectral rho-r")
def spectral_rho_r(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    c = _square(inputs, "matrix", "C'")
    if check_rooted_matrix(c).rooted:
        rho = rho_r_rooted(c, settings.tol, settings.max_iter)
    else:
        rho = rho_r_general(c)
    result = rho.to_dict()
    result["value"] = _rho_value(rho.value)
    return result


@handler("spectral eigenvalues")
def spectral_eigenvalues(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    pairs = dense_eigenvalues(_square(inputs, "matrix", "C"))
    return {"eigenvalues": [[re, im] for re, im in pairs]}


# ============================================================================
# ROOTED / QUOTIENT
# ============================================================================

@handler("rooted-check")
def rooted_check(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    check = check_rooted_matrix(_square(inputs, "matrix", "C'"))
    result = check.to_dict()
    result["transformed"] = None if check.certificate is None else check.certificate.transformed
    return result


@handler("quotient")
def quotient(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    """Pi(C) and its equitability; with transpose, Pi(C'^T) and the rho_r reduction."""
    c = _square(inputs, "matrix", "C")
    p = _partition(inputs)
    transpose = _bool(inputs, "transpose")
    rho_r = direct = None
    if transpose:
        reduction = reduce_by_transpose_quotient(c, p, settings.tol, settings.max_iter)
        rho_r, direct = reduction.rho_r.value, reduction.direct.value
    result = is_equitable(c.T if transpose else c, p).to_dict()
    result.update({"transpose": transpose, "rho_r": rho_r, "direct_rho_r": direct})
    return result


# ============================================================================
# BOUNDS
# ============================================================================

def _partition_bound(inputs: Dict[str, Any], settings: ToolkitSettings, bound_fn) -> Dict[str, Any]:
    c = _square(inputs, "matrix", "C")
    p = _partition(inputs)
    m = inputs.get("m")
    m = None if m is None else as_square(m, "M")
    report = bound_fn(c, p, m, settings.tol, settings.max_iter, diagnose=True, cross_check=True)
    result = report.to_dict()
    result["established"] = True
    return result


@handler("bound upper")
def bound_upper(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    return _partition_bound(inputs, settings, upper_bound)


@handler("bound lower")
def bound_lower(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    return _partition_bound(inputs, settings, lower_bound)


@handler("bound duan-zhou")
def bound_duan_zhou(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    c = _square(inputs, "matrix", "C")
    if inputs.get("ell") is None:
        report = best_duan_zhou(c)
    else:
        report = duan_zhou_bound(c, _int(inputs, "ell"))
    result = report.to_dict()
    result["refined"] = refined_duan_zhou(c, report.ell).to_dict() if _bool(inputs, "refined") else None
    return result


@handler("bound entry-sum")
def bound_entry_sum(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    c = _square(inputs, "matrix", "C")
    result = entrysum_bound(c).to_dict()
    result["rho"] = spectral_radius_nonneg(c, settings.tol, settings.max_iter).value
    return result


@handler("bound stanley")
def bound_stanley(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    e = _int(inputs, "e")
    return {"e": e, "bound": stanley_bound(e), "exact": stanley_bound_exact(e)}


@handler("bound mn")
def bound_mn(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    r = [float(x) for x in as_matrix([_get(inputs, "r")], "r")[0]]
    n = _int(inputs, "n", len(r))
    if n != len(r):
        raise DimensionError(f"r has {len(r)} entries, expected n={n}")
    params = MnParams.build(_float(inputs, "d"), _float(inputs, "f1"), _float(inputs, "f2"), r)
    m = mn_matrix(params)
    closed = mn_rho_closed_form(params)
    numeric = rho_r_rooted(m, settings.tol, settings.max_iter).value
    return {
        "params": params.to_dict(),
        "matrix": m,
        "closed_form": closed,
        "rho_r": numeric,
        "agrees": abs(closed - numeric) <= 1e-9 * (1.0 + abs(closed)),
    }


@handler("bound compare")
def bound_compare(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    c = _square(inputs, "matrix", "C")
    cp = _square(inputs, "cprime", "C'")
    cert = rooted_comparison(c, cp, _direction(inputs), settings.tol, settings.max_iter)
    if not cert.valid:
        raise CertificateError(f"comparison certificate invalid: {cert.failures[0]}", cert)
    result = cert.to_dict()
    result["established"] = True
    return result


@handler("bound sweep")
def bound_sweep(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    return run_suite(str(_get(inputs, "suite")), _int(inputs, "trials", 1000), settings.seed).to_dict()


# ============================================================================
# CONSTRUCT
# ============================================================================

def _extremal_params(inputs: Dict[str, Any]) -> ExtremalParams:
    c = _int(inputs, "c")
    return ExtremalParams.build(c, _int(inputs, "t"), _int(inputs, "n", c + 2), _bool(inputs, "zero_trace"))


@handler("construct a0")
def construct_a0_command(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    params = _extremal_params(inputs)
    a = construct_a0(params)
    return {
        "params": params.to_dict(),
        "matrix": a,
        "ones": int(a.sum()),
        "rho": spectral_radius_nonneg(a, settings.tol, settings.max_iter).value,
    }


@handler("construct a0-prime")
def construct_a0_prime_command(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    c = _int(inputs, "c")
    n = _int(inputs, "n", c + 2)
    a = construct_a0_prime(c, n)
    return {
        "c": c,
        "n": n,
        "matrix": a,
        "ones": int(a.sum()),
        "rho": spectral_radius_nonneg(a, settings.tol, settings.max_iter).value,
    }


@handler("construct small-t")
def construct_small_t(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    params = _extremal_params(inputs)
    forms = small_t_extremal(params)
    return {
        "params": params.to_dict(),
        "matrix": forms[0],
        "forms": forms,
        "rho": [spectral_radius_nonneg(a, settings.tol, settings.max_iter).value for a in forms],
    }


@handler("construct polynomials")
def construct_polynomials(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    return conjecture_polynomials(
        _int(inputs, "c"), _int(inputs, "t"), _int(inputs, "s"),
        _float(inputs, "a"), _float(inputs, "b"), _bool(inputs, "zero_trace"),
    ).to_dict()


@handler("construct proof-quotient")
def construct_proof_quotient(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    c, s = _int(inputs, "c"), _int(inputs, "s")
    a, b = _float(inputs, "a"), _float(inputs, "b")
    q = quotient_matrices_6_1(c, s, a, b, _bool(inputs, "zero_trace"), cross_check=True)
    return {"matrix": q, "rho_r": _rho_value(rho_r_general(q).value)}


@handler("construct statistics")
def construct_statistics(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    a = _square(inputs, "matrix", "A")
    c = _int(inputs, "c")
    zero_trace = _bool(inputs, "zero_trace")
    stats = block_statistics(a, c, zero_trace)
    result = stats.to_dict()
    result["matrix"] = stats.oriented
    result["proof_bound"] = check_proof_bound(a, c, zero_trace).to_dict() if stats.s <= c else None
    return result


# ============================================================================
# VERIFY
# ============================================================================

def _verify(inputs: Dict[str, Any], settings: ToolkitSettings, zero_trace: bool) -> Dict[str, Any]:
    params = ExtremalParams.from_e(_int(inputs, "n"), _int(inputs, "e"), zero_trace)
    budget = _int(inputs, "budget", settings.budget)
    workers = _int(inputs, "workers", settings.workers)
    if budget < 1 or workers < 1:
        raise InputError(f"budget and workers must be positive, got budget={budget}, workers={workers}")
    report = verify_conjecture(
        params,
        budget=budget,
        workers=workers,
        progress=_bool(inputs, "progress"),
        full=_bool(inputs, "full"),
        check_bound=_bool(inputs, "check_bound"),
        tie_tol=settings.tie_tol,
        tol=settings.tol,
        max_iter=settings.max_iter,
    )
    get_metrics().record_candidates("zero-trace" if zero_trace else "conjecture-c", report.candidates_examined)
    result = report.to_dict()
    result["matrix"] = report.maximizer
    return result


@handler("verify conjecture-c")
def verify_conjecture_c(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    return _verify(inputs, settings, False)


@handler("verify zero-trace")
def verify_zero_trace(inputs: Dict[str, Any], settings: ToolkitSettings) -> Dict[str, Any]:
    return _verify(inputs, settings, True)


# ============================================================================
# EXECUTION
# ============================================================================

def _failure_result(error: HypothesisError) -> Dict[str, Any]:
    return {
        "established": False,
        "hypothesis_ok": False,
        "error": str(error),
        "check": to_jsonable(error.check) if error.check is not None else None,
    }


def execute(command: str, inputs: Dict[str, Any], settings: Optional[ToolkitSettings] = None,
            use_cache: bool = False) -> Tuple[Report, int]:
    """
    Run one command and return (Report, exit code).

    Raises:
        InputError: unknown command or malformed inputs (exit code 1 at the CLI)
    """
    if command not in HANDLERS:
        raise InputError(f"unknown command {command!r}; choose from {sorted(HANDLERS)}")
    settings = settings or get_settings()
    inputs = to_jsonable(inputs)
    digest = inputs_digest(command, inputs, settings.to_dict())

    if use_cache:
        with CACHE_LOCK:
            if digest in REPORT_CACHE:
                logger.debug(f"[CLI] Cache hit for {command}")
                return REPORT_CACHE[digest]

    start = time.time()
    with capture_warnings() as warnings:
        try:
            result = HANDLERS[command](inputs, settings)
            exit_code = EXIT_OK
        except HypothesisError as e:
            logger.info(f"[CLI] {command}: not established ({e})")
            result = _failure_result(e)
            exit_code = EXIT_NOT_ESTABLISHED
    latency = time.time() - start

    report = Report(command, digest, to_jsonable(result), list(warnings))
    get_metrics().record_report(command, exit_code, latency)
    logger.info(
        f"[CLI] {command} finished with exit code {exit_code}",
        extra={"command": command, "inputs_digest": digest, "latency_ms": round(latency * 1000, 2)},
    )

    if use_cache:
        with CACHE_LOCK:
            REPORT_CACHE[digest] = (report, exit_code)
    return report, exit_code


def commands() -> List[str]:
    return sorted(HANDLERS)
