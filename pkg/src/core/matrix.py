"""
Matrix Core - dense arithmetic, characteristic and quotient matrices.

PURPOSE:
    Every operation in RootBound carries its matrices as float64 numpy arrays.
    This module is the single gate that turns user data into such arrays and
    the home of the partition-based constructions everything else builds on:

        S      characteristic matrix of a partition (n x l, one 1 per row)
        Pi(C)  quotient matrix (S^T S)^-1 S^T C S  (block row-sum averages)
        SPi(C) = CS  equitability test

RULES:
    - Arrays are validated once here (shape, finiteness) and never mutated.
    - Indices in violation reports are 1-based.
    - Equitability tolerance defaults to 1e-9 * (1 + max|c_ij|).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.core.errors import DimensionError, MatrixFormatError, NegativeEntryError
from src.core.partition import Partition

# ============================================================================
# TOLERANCES
# ============================================================================
EQUITABLE_REL_TOL = 1e-9


# ============================================================================
# VALIDATION
# ============================================================================

def as_matrix(data: Any, name: str = "matrix") -> np.ndarray:
    """Convert data to a finite 2-D float64 array with positive dimensions."""
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as e:
        raise MatrixFormatError(f"{name}: entries are not real numbers ({e})") from e

    if arr.ndim != 2:
        raise MatrixFormatError(f"{name}: expected a 2-D matrix, got {arr.ndim} dimension(s)")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise MatrixFormatError(f"{name}: dimensions must be positive, got {arr.shape}")

    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        i, j = bad[0]
        raise MatrixFormatError(f"{name}: entry ({i + 1},{j + 1}) is not finite")
    arr.setflags(write=False)
    return arr


def as_square(data: Any, name: str = "matrix") -> np.ndarray:
    arr = as_matrix(data, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name}: expected a square matrix, got {arr.shape[0]}x{arr.shape[1]}")
    return arr


def as_vector(data: Any, name: str = "vector") -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as e:
        raise MatrixFormatError(f"{name}: entries are not real numbers ({e})") from e
    if arr.ndim != 1 or arr.size < 1:
        raise MatrixFormatError(f"{name}: expected a nonempty 1-D vector")
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise MatrixFormatError(f"{name}: entry {bad[0] + 1} is not finite")
    return arr


def require_nonnegative(c: np.ndarray, name: str = "matrix") -> None:
    neg = np.argwhere(c < 0)
    if neg.size:
        i, j = neg[0]
        raise NegativeEntryError(
            f"{name}: entry ({i + 1},{j + 1}) = {c[i, j]!r} is negative"
        )


def require_partition_fits(c: np.ndarray, p: Partition, name: str = "matrix") -> None:
    if c.shape[0] != p.n:
        raise DimensionError(
            f"{name} has order {c.shape[0]} but the partition covers n={p.n}"
        )


def default_tolerance(*arrays: np.ndarray) -> float:
    """1e-9 * (1 + max|entry|) over all given arrays."""
    scale = max((float(np.max(np.abs(a))) for a in arrays if a.size), default=0.0)
    return EQUITABLE_REL_TOL * (1.0 + scale)


# ============================================================================
# BASIC QUANTITIES
# ============================================================================

def row_sums(c: np.ndarray) -> np.ndarray:
    return np.asarray(c, dtype=float).sum(axis=1)


def identity(n: int) -> np.ndarray:
    return np.eye(n)


def all_ones(rows: int, cols: Optional[int] = None) -> np.ndarray:
    """J_{rows x cols}."""
    return np.ones((rows, rows if cols is None else cols))


def direct_sum(*blocks: np.ndarray) -> np.ndarray:
    """Block-diagonal A (+) B (+) ..."""
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols))
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


# ============================================================================
# PARTITION CONSTRUCTIONS
# ============================================================================

def characteristic_matrix(p: Partition) -> np.ndarray:
    """n x l (0,1)-matrix S with s_jb = 1 iff j in pi_b."""
    s = np.zeros((p.n, p.size))
    s[np.arange(p.n), p.block_of()] = 1.0
    return s


def block_row_sums(c: np.ndarray, p: Partition) -> np.ndarray:
    """n x l matrix CS: entry (i, b) is the row sum of row i inside block b."""
    return np.asarray(c, dtype=float) @ characteristic_matrix(p)


def quotient_matrix(c: np.ndarray, p: Partition) -> np.ndarray:
    """Pi(C) = (S^T S)^-1 S^T C S; entry (a, b) averages the row sums of C[pi_a|pi_b]."""
    c = as_square(c)
    require_partition_fits(c, p)
    s = characteristic_matrix(p)
    return (s.T @ c @ s) / p.block_sizes[:, None]


@dataclass
class EquitabilityResult:
    """Outcome of the SPi(C) = CS test."""

    is_equitable: bool
    quotient: np.ndarray
    tolerance: float
    violations: List[Dict[str, Any]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.is_equitable

    def to_dict(self) -> Dict[str, Any]:
        return {
            "equitable": self.is_equitable,
            "quotient": self.quotient.tolist(),
            "tolerance": self.tolerance,
            "violations": self.violations,
        }


def is_equitable(c: np.ndarray, p: Partition, tol: Optional[float] = None) -> EquitabilityResult:
    """
    Check whether every row of block a has the same row sum into block b.

    Violations list each (row i, block b) whose block row-sum differs from
    the block average by more than tol.
    """
    c = as_square(c)
    require_partition_fits(c, p)
    tol = default_tolerance(c) if tol is None else float(tol)
    quotient = quotient_matrix(c, p)
    s = characteristic_matrix(p)
    sums = c @ s
    expected = s @ quotient
    diff = np.abs(expected - sums)

    violations = [
        {
            "row": int(i) + 1,
            "block": int(b) + 1,
            "row_sum": float(sums[i, b]),
            "block_average": float(expected[i, b]),
        }
        for i, b in np.argwhere(diff > tol)
    ]
    return EquitabilityResult(
        is_equitable=not violations,
        quotient=quotient,
        tolerance=tol,
        violations=violations,
    )


def quotient_vector(u: Sequence[float], p: Partition) -> np.ndarray:
    """Block averages of u."""
    u = as_vector(u, "u")
    if u.size != p.n:
        raise DimensionError(f"vector has length {u.size} but the partition covers n={p.n}")
    s = characteristic_matrix(p)
    return (s.T @ u) / p.block_sizes


def is_equitable_vector(u: Sequence[float], p: Partition, tol: Optional[float] = None) -> bool:
    """True iff u is constant on every block, i.e. u = S Pi(u)."""
    u = as_vector(u, "u")
    w = quotient_vector(u, p)
    tol = EQUITABLE_REL_TOL * (1.0 + float(np.max(np.abs(u)))) if tol is None else float(tol)
    return bool(np.all(np.abs(characteristic_matrix(p) @ w - u) <= tol))
