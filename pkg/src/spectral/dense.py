"""
Dense eigenvalue solver.

Wraps LAPACK geev through scipy.linalg.eig (balancing, Hessenberg reduction
and shifted QR). Convergence failures surface as ConvergenceError; residuals
above 1e-8 * ||C|| are logged, never silently dropped.
"""

import logging
from typing import List, Tuple

import numpy as np
import scipy.linalg

from src.core.errors import ConvergenceError, DimensionError
from src.core.matrix import as_square

logger = logging.getLogger(__name__)

DENSE_MAX_ORDER = 512
RESIDUAL_REL_TOL = 1e-8


def dense_eigenpairs(c) -> Tuple[np.ndarray, np.ndarray]:
    """All eigenvalues (complex array) and unit-norm right eigenvectors (columns)."""
    c = as_square(c, "C")
    n = c.shape[0]
    if n > DENSE_MAX_ORDER:
        raise DimensionError(f"dense eigensolver supports order <= {DENSE_MAX_ORDER}, got {n}")

    try:
        values, vectors = scipy.linalg.eig(c, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"dense eigensolver failed to converge on order-{n} input: {e}") from e

    scale = max(float(np.linalg.norm(c, 1)), np.finfo(float).tiny)
    residuals = np.linalg.norm(c @ vectors - vectors * values[None, :], axis=0)
    worst = int(np.argmax(residuals)) if n else 0
    if n and residuals[worst] > RESIDUAL_REL_TOL * scale:
        logger.warning(
            f"[SPECTRAL] Eigenpair residual {residuals[worst]:.3e} exceeds "
            f"{RESIDUAL_REL_TOL:.0e} * ||C|| for eigenvalue {values[worst]}"
        )
    return values, vectors


def dense_eigenvalues(c) -> List[Tuple[float, float]]:
    """Eigenvalues as (real, imaginary) pairs, ordered by descending real then imaginary part."""
    values, _ = dense_eigenpairs(c)
    pairs = [(float(z.real), float(z.imag)) for z in values]
    pairs.sort(key=lambda p: (-p[0], -p[1]))
    return pairs


def geometric_multiplicity(c, value: float, rel_tol: float = 1e-8) -> int:
    """n - rank(C - value*I), rank taken with threshold rel_tol * (1 + ||C||)."""
    c = as_square(c, "C")
    n = c.shape[0]
    sigma = np.linalg.svd(c - value * np.eye(n), compute_uv=False)
    threshold = rel_tol * (1.0 + float(np.linalg.norm(c, 1)))
    return int(np.sum(sigma <= threshold))


def algebraic_multiplicity(c, value: float, rel_tol: float = 1e-6) -> int:
    values, _ = dense_eigenpairs(c)
    return int(np.sum(np.abs(values - value) <= rel_tol * (1.0 + abs(value))))


def companion_matrix(coefficients) -> np.ndarray:
    """Companion matrix of a monic-normalized polynomial given highest degree first."""
    coeffs = np.asarray(coefficients, dtype=float)
    if coeffs.size < 2 or coeffs[0] == 0:
        raise DimensionError("companion matrix needs degree >= 1 and a nonzero leading coefficient")
    degree = coeffs.size - 1
    comp = np.diag(np.ones(degree - 1), -1)
    comp[0, :] = -coeffs[1:] / coeffs[0]
    return comp
