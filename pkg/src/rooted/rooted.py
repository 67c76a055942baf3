"""
Rooted vectors, rooted matrices and the Q-similarity transform.

DEFINITIONS:
    rooted vector      v_i >= v_n >= 0 for every i < n
    strictly rooted    v_i >  v_n >  0
    Q                  I_n + sum_{i<n} E_in   (identity with an all-ones last column)
    rooted matrix      C' such that for some shift d the first n-1 columns and
                       the row-sum vector of C' + dI are all rooted; equivalently
                       Q^-1 (C' + dI) Q is entrywise nonnegative.

DECIDING ROOTEDNESS:
    Only the diagonal entries and r'_n + d depend on d, so C' is rooted iff
        (a) c'_nj >= 0                    for j <= n-1
        (b) c'_ij >= c'_nj                for i != j, i, j <= n-1
        (c) r'_i  >= r'_n                 for i <= n-1
    and the smallest witness is
        d* = max(-r'_n, max_{j<=n-1} (c'_nj - c'_jj)).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from src.core.errors import DimensionError
from src.core.matrix import as_square, as_vector

logger = logging.getLogger(__name__)

# Absolute comparison tolerance is ROOTED_ABS_TOL * (1 + max|entry|)
ROOTED_ABS_TOL = 1e-12


# ============================================================================
# Q MATRICES
# ============================================================================

def q_matrix(n: int) -> np.ndarray:
    if n < 1:
        raise DimensionError(f"Q requires n >= 1, got {n}")
    q = np.eye(n)
    q[:, -1] = 1.0
    return q


def q_matrix_inverse(n: int) -> np.ndarray:
    if n < 1:
        raise DimensionError(f"Q^-1 requires n >= 1, got {n}")
    q = np.eye(n)
    q[:-1, -1] = -1.0
    return q


# ============================================================================
# ROOTED VECTORS
# ============================================================================

def is_rooted_vector(v) -> bool:
    v = as_vector(v, "v")
    return bool(v[-1] >= 0 and np.all(v[:-1] >= v[-1]))


def is_strictly_rooted_vector(v) -> bool:
    v = as_vector(v, "v")
    return bool(v[-1] > 0 and np.all(v[:-1] > v[-1]))


# ============================================================================
# Q TRANSFORM
# ============================================================================

def q_transform(cp) -> np.ndarray:
    """
    Q^-1 C' Q written out entrywise:

        interior (i, j), i, j < n   c'_ij - c'_nj
        last column, i < n          r'_i - r'_n
        (n, n)                      r'_n
        bottom row, j < n           c'_nj
    """
    cp = as_square(cp, "C'")
    n = cp.shape[0]
    if n < 2:
        raise DimensionError(f"Q transform requires order n >= 2, got {n}")
    r = cp.sum(axis=1)
    t = np.empty_like(cp)
    t[:-1, :-1] = cp[:-1, :-1] - cp[-1, :-1]
    t[:-1, -1] = r[:-1] - r[-1]
    t[-1, :-1] = cp[-1, :-1]
    t[-1, -1] = r[-1]
    return t


# ============================================================================
# ROOTED MATRICES
# ============================================================================

@dataclass
class RootedCertificate:
    """Witness shift d and the nonnegative transform Q^-1 (C' + dI) Q."""

    d: float
    transformed: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {"d": self.d, "transformed": self.transformed.tolist()}


@dataclass
class RootednessCheck:
    """Full verdict of the rootedness test, including every violated condition."""

    rooted: bool
    certificate: Optional[RootedCertificate] = None
    violations: List[Dict[str, Any]] = field(default_factory=list)
    tolerance: float = 0.0

    @property
    def d(self) -> Optional[float]:
        return self.certificate.d if self.certificate else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rooted": self.rooted,
            "d": self.d,
            "violations": self.violations,
        }


def _rooted_tolerance(cp: np.ndarray) -> float:
    return ROOTED_ABS_TOL * (1.0 + float(np.max(np.abs(cp))))


def check_rooted_matrix(cp) -> RootednessCheck:
    """Decide rootedness of C' and report each violated condition (1-based indices)."""
    cp = as_square(cp, "C'")
    n = cp.shape[0]
    tol = _rooted_tolerance(cp)

    if n == 1:
        # Q = [1]; any d >= -c'_11 makes [c'_11 + d] nonnegative
        d = -float(cp[0, 0])
        return RootednessCheck(True, RootedCertificate(d, np.zeros((1, 1))), [], tol)

    r = cp.sum(axis=1)
    bottom = cp[-1, :-1]
    violations: List[Dict[str, Any]] = []

    for j in np.flatnonzero(bottom < -tol):
        violations.append({
            "condition": "bottom-row-nonnegative",
            "row": n,
            "col": int(j) + 1,
            "value": float(bottom[j]),
        })

    interior = cp[:-1, :-1]
    gap = interior - bottom[None, :]
    np.fill_diagonal(gap, np.inf)
    for i, j in np.argwhere(gap < -tol):
        violations.append({
            "condition": "column-rooted",
            "row": int(i) + 1,
            "col": int(j) + 1,
            "value": float(interior[i, j]),
            "bottom": float(bottom[j]),
        })

    for i in np.flatnonzero(r[:-1] < r[-1] - tol):
        violations.append({
            "condition": "row-sum-rooted",
            "row": int(i) + 1,
            "row_sum": float(r[i]),
            "last_row_sum": float(r[-1]),
        })

    if violations:
        logger.debug(f"[ROOTED] Not rooted: {len(violations)} violation(s)")
        return RootednessCheck(False, None, violations, tol)

    d = max(-float(r[-1]), float(np.max(bottom - np.diag(interior))))
    transformed = q_transform(cp) + d * np.eye(n)
    low = float(transformed.min())
    if low < -tol:
        # only reachable through rounding in the row sums
        logger.warning(f"[ROOTED] Transform entry {low!r} below tolerance {tol!r}")
    transformed = np.where((transformed < 0) & (transformed >= -tol), 0.0, transformed)
    return RootednessCheck(True, RootedCertificate(d, transformed), [], tol)


def is_rooted_matrix(cp) -> Optional[RootedCertificate]:
    """Return the minimal-shift certificate, or None when C' is not rooted."""
    return check_rooted_matrix(cp).certificate


def verify_rooted_witness(cp, d: float) -> bool:
    """True iff the given shift d makes Q^-1 (C' + dI) Q nonnegative."""
    cp = as_square(cp, "C'")
    n = cp.shape[0]
    if n == 1:
        return bool(cp[0, 0] + d >= 0)
    t = q_transform(cp + d * np.eye(n))
    return bool(t.min() >= -_rooted_tolerance(cp))
