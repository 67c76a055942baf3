"""
Spectral radius of nonnegative matrices.

ALGORITHM:
    Power iteration on B = C + I from the all-ones start vector. For positive
    v the Collatz-Wielandt quotients

        min_i (Bv)_i / v_i  <=  rho(B)  <=  max_i (Bv)_i / v_i

    bracket the Perron root at every step. The shift keeps zero rows from
    trapping the iterate and makes every irreducible input primitive.

STOPPING:
    - bracket width <= tol                      -> method "power"
    - width fails to shrink by STALL_FACTOR over
      STALL_WINDOW steps, or max_iter reached   -> method "dense-fallback"

DENSE FALLBACK:
    The value comes from the strong components (Frobenius normal form):
    rho(C) is the largest component radius, and the nonnegative eigenvector
    is assembled from a basic component with no basic component upstream.
    Dense eigenvalues cross-check the result.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List

import numpy as np

from src.core.graph import component_members, component_reachability, strong_components
from src.core.matrix import as_square, require_nonnegative
from src.spectral.dense import dense_eigenpairs

logger = logging.getLogger(__name__)

# ============================================================================
# ITERATION CONSTANTS
# ============================================================================
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 1_000_000
STALL_WINDOW = 200
STALL_FACTOR = 0.999

# Bracket width below a few ulps of rho cannot be resolved in float64
_ULP_FACTOR = 64 * np.finfo(float).eps
_UNDERFLOW_GUARD = 1e-290


class SpectralMethod(Enum):
    POWER = "power"
    DENSE_FALLBACK = "dense-fallback"


@dataclass
class SpectralResult:
    """Perron root estimate with its Collatz-Wielandt bracket."""

    value: float
    cw_lower: float
    cw_upper: float
    eigenvector: np.ndarray
    iterations: int
    method: SpectralMethod

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "cw_lower": self.cw_lower,
            "cw_upper": self.cw_upper,
            "eigenvector": self.eigenvector.tolist(),
            "iterations": self.iterations,
            "method": self.method.value,
        }


def _normalize_nonneg(x: np.ndarray) -> np.ndarray:
    x = np.where(np.abs(x) <= 1e-15 * max(1.0, float(np.max(np.abs(x)))), 0.0, x)
    x = np.clip(x, 0.0, None)
    total = x.sum()
    if total <= 0:
        return np.full(x.size, 1.0 / x.size)
    return x / total


def spectral_radius_nonneg(c, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """rho(C) for entrywise nonnegative square C, with a certified bracket."""
    c = as_square(c, "C")
    require_nonnegative(c, "C")
    n = c.shape[0]

    if n == 1:
        x = float(c[0, 0])
        return SpectralResult(x, x, x, np.ones(1), 0, SpectralMethod.POWER)

    b = c + np.eye(n)
    v = np.full(n, 1.0 / n)
    best = np.inf
    stall = 0
    lo = hi = 1.0
    iterations = 0

    for iterations in range(1, int(max_iter) + 1):
        w = b @ v
        ratios = w / v
        lo, hi = float(ratios.min()), float(ratios.max())
        width = hi - lo

        if width <= max(tol, _ULP_FACTOR * hi):
            return SpectralResult(
                value=0.5 * (lo + hi) - 1.0,
                cw_lower=lo - 1.0,
                cw_upper=hi - 1.0,
                eigenvector=_normalize_nonneg(w),
                iterations=iterations,
                method=SpectralMethod.POWER,
            )

        if width < best * STALL_FACTOR:
            best = width
            stall = 0
        else:
            stall += 1
            if stall >= STALL_WINDOW:
                break

        v = w / w.sum()
        if v.min() < _UNDERFLOW_GUARD:
            break

    logger.info(
        f"[SPECTRAL] Bracket stalled at width {hi - lo:.3e} after {iterations} steps "
        f"(order {n}); switching to dense fallback"
    )
    return _dense_fallback(c, lo - 1.0, hi - 1.0, iterations, tol, max_iter)


def left_eigenvector_nonneg(c, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """Perron root with a nonnegative LEFT eigenvector (iteration on C^T)."""
    c = as_square(c, "C")
    return spectral_radius_nonneg(c.T, tol, max_iter)


# ============================================================================
# DENSE FALLBACK
# ============================================================================

def _dense_fallback(c: np.ndarray, lo: float, hi: float, iterations: int,
                    tol: float, max_iter: int) -> SpectralResult:
    values, vectors = dense_eigenpairs(c)
    rho_dense = float(np.max(np.abs(values)))

    count, labels = strong_components(c)
    if count == 1:
        value = rho_dense
        vector = _irreducible_dense_vector(values, vectors, value)
    else:
        members = component_members(labels, count)
        radii: List[float] = []
        perron: List[np.ndarray] = []
        for idx in members:
            sub = c[np.ix_(idx, idx)]
            if idx.size == 1:
                radii.append(float(sub[0, 0]))
                perron.append(np.ones(1))
            else:
                res = spectral_radius_nonneg(sub, tol, max_iter)
                radii.append(res.value)
                perron.append(res.eigenvector)
        value = max(radii)
        if abs(value - rho_dense) > 1e-6 * (1.0 + value):
            logger.warning(
                f"[SPECTRAL] Component radius {value!r} disagrees with dense modulus {rho_dense!r}"
            )
        vector = _frobenius_vector(c, labels, count, members, radii, perron, value)

    return SpectralResult(
        value=value,
        cw_lower=min(lo, value),
        cw_upper=max(hi, value),
        eigenvector=vector,
        iterations=iterations,
        method=SpectralMethod.DENSE_FALLBACK,
    )


def _irreducible_dense_vector(values: np.ndarray, vectors: np.ndarray, rho: float) -> np.ndarray:
    idx = int(np.argmin(np.abs(values - rho)))
    x = vectors[:, idx].real
    if x.sum() < 0:
        x = -x
    return _normalize_nonneg(x)


def _frobenius_vector(c: np.ndarray, labels: np.ndarray, count: int, members: List[np.ndarray],
                      radii: List[float], perron: List[np.ndarray], rho: float) -> np.ndarray:
    """
    Nonnegative eigenvector for rho of a reducible nonnegative matrix.

    Pick a basic component K (radius rho) that no other basic component can
    reach. Set x_K to its Perron vector, zero on everything K cannot be
    reached from, and solve (rho I - C_UU) x_U = C_UK x_K on the components U
    upstream of K (all non-basic, so the system has a nonnegative solution).
    """
    reach = component_reachability(c, labels, count)
    gap = 1e-9 * (1.0 + rho)
    basic = [k for k in range(count) if radii[k] >= rho - gap]
    k_star = next(
        k for k in basic
        if not any(reach[other, k] for other in basic if other != k)
    )

    n = c.shape[0]
    x = np.zeros(n)
    k_idx = members[k_star]
    x[k_idx] = perron[k_star]

    upstream = [m for m in range(count) if m != k_star and reach[m, k_star]]
    if upstream:
        u_idx = np.concatenate([members[m] for m in upstream])
        system = rho * np.eye(u_idx.size) - c[np.ix_(u_idx, u_idx)]
        rhs = c[np.ix_(u_idx, k_idx)] @ x[k_idx]
        x[u_idx] = np.linalg.solve(system, rhs)
    return _normalize_nonneg(x)
