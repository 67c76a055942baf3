"""
Staircase class S*(n, e) and the block statistics of its members.

A (0,1)-matrix is a staircase when a_ij = 1 forces a_hk = 1 for every
h <= i, k <= j (with h != k in the zero-trace variant). Every row is then
an initial segment of columns, {1..m} or {1..m} minus its own index, so a
staircase matrix is fixed by its row-sum sequence. Enumeration walks those
sequences in ascending lexicographic order and keeps the ones whose rows
nest correctly.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional

import numpy as np

from src.core.errors import ConsistencyError, DimensionError, InputError, NotStaircaseError
from src.core.matrix import as_square
from src.core.partition import Partition
from src.rooted.rooted import check_rooted_matrix
from src.bounds.theorem import check_upper_hypotheses
from src.spectral.power import spectral_radius_nonneg
from src.spectral.rho_r import rho_r_rooted

logger = logging.getLogger(__name__)

FULL_SEARCH_MAX_ORDER = 3
PROOF_BOUND_SLACK = 1e-8


# ============================================================================
# MEMBERSHIP
# ============================================================================

def _row_pattern(n: int, i: int, s: int, zero_trace: bool) -> Optional[np.ndarray]:
    """The only staircase row i (0-based) with s ones, or None if none fits."""
    row = np.zeros(n, dtype=np.int64)
    if not zero_trace:
        if s > n:
            return None
        row[:s] = 1
        return row
    if s <= i:
        row[:s] = 1
        return row
    if s + 1 > n:
        return None
    row[:s + 1] = 1
    row[i] = 0
    return row


def _nests(rows: List[np.ndarray], new: np.ndarray, zero_trace: bool) -> bool:
    """Every earlier row h must contain columns 1..m of the new row (except h itself)."""
    ones = np.flatnonzero(new)
    if ones.size == 0:
        return True
    width = int(ones[-1]) + 1
    for h, row in enumerate(rows):
        need = np.ones(width, dtype=np.int64)
        if zero_trace and h < width:
            need[h] = 0
        if np.any(row[:width] < need):
            return False
    return True


def is_staircase(a, zero_trace: bool = False) -> bool:
    a = as_square(a, "A")
    if not np.all((a == 0) | (a == 1)):
        return False
    if zero_trace and np.any(np.diag(a) != 0):
        return False
    n = a.shape[0]
    rows: List[np.ndarray] = []
    for i in range(n):
        row = a[i].astype(np.int64)
        expected = _row_pattern(n, i, int(row.sum()), zero_trace)
        if expected is None or not np.array_equal(row, expected) or not _nests(rows, row, zero_trace):
            return False
        rows.append(row)
    return True


def _check_count(n: int, e: int, zero_trace: bool) -> None:
    if n < 1:
        raise DimensionError(f"n must be positive, got {n}")
    cap = n * n - n if zero_trace else n * n
    if not 0 <= e <= cap:
        raise InputError(f"e={e} outside 0..{cap} for n={n}{' with zero trace' if zero_trace else ''}")


def enumerate_staircase(n: int, e: int, zero_trace: bool = False) -> Iterator[np.ndarray]:
    """Yield every member of S*(n, e) once, ascending in row-sum sequence."""
    _check_count(n, e, zero_trace)
    row_cap = n - 1 if zero_trace else n

    def extend(rows: List[np.ndarray], remaining: int) -> Iterator[np.ndarray]:
        i = len(rows)
        left = n - i
        if left == 0:
            if remaining == 0:
                yield np.array(rows, dtype=np.int64)
            return
        for s in range(0, min(remaining, row_cap) + 1):
            # later rows hold at most s ones each (s + 1 with zero trace)
            if remaining - s > (left - 1) * (s + 1 if zero_trace else s):
                continue
            row = _row_pattern(n, i, s, zero_trace)
            if row is None or not _nests(rows, row, zero_trace):
                continue
            rows.append(row)
            yield from extend(rows, remaining - s)
            rows.pop()

    yield from extend([], e)


def enumerate_all_binary(n: int, e: int, zero_trace: bool = False) -> Iterator[np.ndarray]:
    """Every (0,1)-matrix of order n <= 3 with e ones; the oracle for the staircase reduction."""
    if n > FULL_SEARCH_MAX_ORDER:
        raise InputError(f"full search is limited to n <= {FULL_SEARCH_MAX_ORDER}, got n={n}")
    _check_count(n, e, zero_trace)
    cells = [(i, j) for i in range(n) for j in range(n) if not (zero_trace and i == j)]
    for chosen in itertools.combinations(cells, e):
        a = np.zeros((n, n), dtype=np.int64)
        for i, j in chosen:
            a[i, j] = 1
        yield a


# ============================================================================
# BLOCK STATISTICS
# ============================================================================

@dataclass
class BlockStatistics:
    """
    Statistics of a staircase A relative to its leading c x c block.

    s = r_{c+1}; a and b sum r_i - c (r_i - c + 1 for zero trace) over rows
    1..s and s+1..c; r counts zeros of A[c|c] (off-diagonal for zero trace).
    A is oriented so that A[c|c) carries no more ones than A(c|c].
    """

    s: int
    a: int
    b: int
    r: int
    t: int
    transposed: bool
    degenerate: bool
    oriented: np.ndarray
    inequalities: Dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "s": self.s,
            "a": self.a,
            "b": self.b,
            "r": self.r,
            "t": self.t,
            "transposed": self.transposed,
            "degenerate": self.degenerate,
            "inequalities": self.inequalities,
        }


def block_statistics(a, c: int, zero_trace: bool = False) -> BlockStatistics:
    a = as_square(a, "A")
    n = a.shape[0]
    if not 1 <= c <= n - 1:
        raise DimensionError(f"c must satisfy 1 <= c <= n-1={n - 1}, got {c}")
    if not is_staircase(a, zero_trace):
        raise NotStaircaseError("matrix is not in the staircase class S*(n,e)")

    a = a.astype(np.int64)
    transposed = int(a[:c, c:].sum()) > int(a[c:, :c].sum())
    if transposed:
        a = a.T.copy()

    r = a.sum(axis=1)
    shift = c - 1 if zero_trace else c
    s = int(r[c])
    a_stat = int(np.sum(r[:s] - shift))
    b_stat = int(np.sum(r[s:c] - shift))
    lead = a[:c, :c]
    zeros = int(np.sum(lead == 0)) - (c if zero_trace else 0)
    e = int(r.sum())
    t = e - c * shift

    tail = int(r[c + 1:].sum())
    if a_stat + b_stat + s + tail != t:
        raise ConsistencyError(f"a+b+s+tail = {a_stat + b_stat + s + tail} differs from t={t}")

    inequalities = {
        "2a+b<=t": 2 * a_stat + b_stat <= t,
        "s<=t-a-b": s <= t - a_stat - b_stat,
    }
    t_max = 2 * c - 1 if zero_trace else 2 * c
    if 0 <= t <= t_max and not all(inequalities.values()):
        raise ConsistencyError(f"block inequalities fail for s={s}, a={a_stat}, b={b_stat}, t={t}")

    return BlockStatistics(
        s=s, a=a_stat, b=b_stat, r=zeros, t=t,
        transposed=transposed,
        degenerate=s == 0,
        oriented=a,
        inequalities=inequalities,
    )


# ============================================================================
# PROOF BOUND
# ============================================================================

def proof_bound_matrix(stats: BlockStatistics, c: int, zero_trace: bool = False) -> np.ndarray:
    """
    (c+1) x (c+1) matrix bounding rho(A) through the partition
    {1}, ..., {c}, {c+1, ..., n}: J_c (J_c - I_c) top-left, r_i - c
    (r_i - c + 1) in the last column, ones in the first s bottom entries.
    """
    if stats.s > c:
        raise InputError(f"s={stats.s} exceeds c={c}; A(c|c) is not zero")
    r = stats.oriented.sum(axis=1)
    m = np.zeros((c + 1, c + 1))
    m[:c, :c] = 1.0
    if zero_trace:
        np.fill_diagonal(m[:c, :c], 0.0)
    m[:c, c] = r[:c] - (c - 1 if zero_trace else c)
    m[c, :stats.s] = 1.0
    return m


@dataclass
class ProofBoundCheck:
    rooted: bool
    rho: float
    bound: Optional[float] = None
    holds: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"rooted": self.rooted, "rho": self.rho, "bound": self.bound, "holds": self.holds}


def check_proof_bound(a, c: int, zero_trace: bool = False) -> ProofBoundCheck:
    """rho(A) <= rho_r(M) for the proof matrix M; skipped when M is not rooted."""
    stats = block_statistics(a, c, zero_trace)
    m = proof_bound_matrix(stats, c, zero_trace)
    rho = spectral_radius_nonneg(stats.oriented).value
    if not check_rooted_matrix(m).rooted:
        return ProofBoundCheck(False, rho)

    n = stats.oriented.shape[0]
    p = Partition.from_zero_based(n, [[i] for i in range(c)] + [list(range(c, n))])
    hypotheses = check_upper_hypotheses(stats.oriented, p, m)
    bound = rho_r_rooted(m).value
    holds = hypotheses.ok and rho <= bound + PROOF_BOUND_SLACK
    if not holds:
        logger.warning(f"[EXTREMAL] Proof bound fails: rho={rho!r}, rho_r(M)={bound!r}, s={stats.s}")
    return ProofBoundCheck(True, rho, bound, holds)
