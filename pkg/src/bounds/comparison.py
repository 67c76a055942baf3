"""
Comparison certificates between two matrices of the same order.

A certificate (P, Q, u, v) orders the eigenvalues lambda of C and lambda' of C'
when

    (i)   P C Q <= P C' Q entrywise            (>= for the lower direction)
    (ii)  C' (Q u) = lambda' (Q u),  u >= 0
    (iii) v^T P C = lambda v^T P,    v >= 0
    (iv)  v^T P Q u > 0

and then lambda <= lambda' (resp. >=). Equality holds iff (PCQ)_ij equals
(PC'Q)_ij on every pair with v_i != 0 and u_j != 0. A certificate failing
any of (i)-(iv) is "certificate-invalid" and carries no ordering claim.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.bounds.theorem import BoundDirection
from src.core.errors import DimensionError
from src.core.matrix import as_square, as_vector
from src.rooted.rooted import q_matrix, q_matrix_inverse
from src.spectral.power import DEFAULT_MAX_ITER, DEFAULT_TOL, left_eigenvector_nonneg
from src.spectral.rho_r import rho_r_rooted

logger = logging.getLogger(__name__)

CERTIFICATE_TOL = 1e-8
SUPPORT_REL_TOL = 1e-10

VERDICT_EQUALITY = "equality"
VERDICT_STRICT = "strict"
VERDICT_INVALID = "certificate-invalid"


@dataclass
class ComparisonCertificate:
    valid: bool
    direction: BoundDirection
    verdict: str
    lam: Optional[float] = None
    lam_prime: Optional[float] = None
    failures: List[str] = field(default_factory=list)
    equality_set: List[Tuple[int, int]] = field(default_factory=list)
    mismatches: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "valid": self.valid,
            "direction": self.direction.value,
            "verdict": self.verdict,
            "lambda": self.lam,
            "lambda_prime": self.lam_prime,
            "failures": self.failures,
            "equality_set": [list(pair) for pair in self.equality_set],
            "mismatches": self.mismatches,
        }


def _rayleigh(a: np.ndarray, x: np.ndarray) -> Tuple[float, float]:
    """Rayleigh quotient of a unit vector and the residual norm ||Ax - lambda x||."""
    lam = float(x @ a @ x)
    return lam, float(np.linalg.norm(a @ x - lam * x))


def _support(x: np.ndarray) -> np.ndarray:
    scale = float(np.max(np.abs(x))) if x.size else 0.0
    return np.flatnonzero(np.abs(x) > SUPPORT_REL_TOL * max(scale, 1e-300))


def comparison_certificate(c, cp, p, q, u, v,
                           direction: BoundDirection = BoundDirection.UPPER,
                           tol: float = CERTIFICATE_TOL) -> ComparisonCertificate:
    c = as_square(c, "C")
    cp = as_square(cp, "C'")
    p = as_square(p, "P")
    q = as_square(q, "Q")
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    n = c.shape[0]
    for name, arr in (("C'", cp), ("P", p), ("Q", q)):
        if arr.shape[0] != n:
            raise DimensionError(f"{name} has order {arr.shape[0]}, expected {n}")
    for name, vec in (("u", u), ("v", v)):
        if vec.size != n:
            raise DimensionError(f"{name} has length {vec.size}, expected {n}")

    failures: List[str] = []
    if np.any(u < -SUPPORT_REL_TOL * (1.0 + np.max(np.abs(u)))):
        failures.append("u has a negative entry")
    if np.any(v < -SUPPORT_REL_TOL * (1.0 + np.max(np.abs(v)))):
        failures.append("v has a negative entry")

    pcq = p @ c @ q
    pcpq = p @ cp @ q
    entry_tol = tol * (1.0 + float(max(np.max(np.abs(pcq)), np.max(np.abs(pcpq)))))
    gap = pcpq - pcq if direction is BoundDirection.UPPER else pcq - pcpq
    if np.any(gap < -entry_tol):
        i, j = np.argwhere(gap < -entry_tol)[0]
        sign = "<=" if direction is BoundDirection.UPPER else ">="
        failures.append(f"(i) PCQ {sign} PC'Q fails at ({i + 1},{j + 1})")

    lam_prime = lam = None
    w = q @ u
    w_norm = float(np.linalg.norm(w))
    if w_norm == 0:
        failures.append("(ii) Qu is the zero vector")
    else:
        lam_prime, residual = _rayleigh(cp, w / w_norm)
        if residual > tol * (1.0 + float(np.linalg.norm(cp, 1))):
            failures.append(f"(ii) Qu is not an eigenvector of C' (residual {residual:.3e})")

    y = v @ p
    y_norm = float(np.linalg.norm(y))
    if y_norm == 0:
        failures.append("(iii) v^T P is the zero vector")
    else:
        lam, residual = _rayleigh(c.T, y / y_norm)
        if residual > tol * (1.0 + float(np.linalg.norm(c, np.inf))):
            failures.append(f"(iii) v^T P is not a left eigenvector of C (residual {residual:.3e})")

    pairing = float(v @ p @ q @ u)
    if not pairing > tol * (1.0 + float(np.linalg.norm(u)) * float(np.linalg.norm(v))):
        failures.append(f"(iv) v^T P Q u = {pairing!r} is not positive")

    if failures:
        logger.info(f"[COMPARE] Certificate invalid: {failures[0]}")
        return ComparisonCertificate(False, direction, VERDICT_INVALID, lam, lam_prime, failures)

    rows, cols = _support(v), _support(u)
    equality_set = [(int(i) + 1, int(j) + 1) for i in rows for j in cols]
    mismatches = [
        {"row": int(i) + 1, "col": int(j) + 1, "pcq": float(pcq[i, j]), "pcpq": float(pcpq[i, j])}
        for i in rows for j in cols
        if abs(pcq[i, j] - pcpq[i, j]) > entry_tol
    ]
    verdict = VERDICT_STRICT if mismatches else VERDICT_EQUALITY

    scale = 1e-6 * (1.0 + abs(lam))
    if verdict == VERDICT_EQUALITY and abs(lam - lam_prime) > scale:
        logger.warning(f"[COMPARE] Equality verdict but lambda={lam!r}, lambda'={lam_prime!r}")
    return ComparisonCertificate(True, direction, verdict, lam, lam_prime, [], equality_set, mismatches)


def rooted_comparison(c, cp, direction: BoundDirection = BoundDirection.UPPER,
                      tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> ComparisonCertificate:
    """
    Certificate with P = I and Q the rooted similarity: u = Q^-1 v' for the
    rooted eigenvector v' of C' and v the nonnegative left Perron vector of C.
    """
    c = as_square(c, "C")
    cp = as_square(cp, "C'")
    n = c.shape[0]
    if cp.shape[0] != n:
        raise DimensionError(f"C' has order {cp.shape[0]}, expected {n}")

    rho = rho_r_rooted(cp, tol, max_iter)
    u = np.clip(q_matrix_inverse(n) @ rho.eigenvector, 0.0, None)
    v = left_eigenvector_nonneg(c, tol, max_iter).eigenvector
    return comparison_certificate(c, cp, np.eye(n), q_matrix(n), u, v, direction)
