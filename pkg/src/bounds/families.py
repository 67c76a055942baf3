"""
Closed-form bound families built on the M_n parametric matrix.

    M_n(d, f1, f2, r)     rooted n x n matrix: f1 off the diagonal and d on it in
                          the top-left (n-1)-block, f2 along the bottom row,
                          last column chosen so the row sums are r
    duan_zhou_bound       rho(C) <= (r_l + d - f + sqrt((r_l - d + f)^2 + 4 f S)) / 2
                          with rows sorted by decreasing row sum, S = sum_{i<l}(r_i - r_l)
    refined_duan_zhou     same shape, d and f read only from the first l-1 columns
    entrysum_bound        rho(C) <= (d - f + sqrt((d - f)^2 + 4 m f)) / 2, m = sum of entries
    stanley_bound         rho(A) <= (-1 + sqrt(1 + 8e)) / 2 for a (0,1)-matrix with e ones
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.bounds.theorem import EqualityVerdict
from src.core.errors import ConsistencyError, DimensionError, InputError
from src.core.graph import is_irreducible
from src.core.matrix import as_square, default_tolerance, require_nonnegative, row_sums
from src.rooted.rooted import check_rooted_matrix

logger = logging.getLogger(__name__)

CHAIN_REL_TOL = 1e-10


# ============================================================================
# M_n
# ============================================================================

@dataclass(frozen=True)
class MnParams:
    """Parameters of M_n; r must satisfy r_j >= r_n."""

    n: int
    d: float
    f1: float
    f2: float
    r: Tuple[float, ...]

    def __post_init__(self):
        if self.n < 2:
            raise DimensionError(f"M_n requires n >= 2, got {self.n}")
        if len(self.r) != self.n:
            raise DimensionError(f"r has length {len(self.r)}, expected n={self.n}")
        for name in ("d", "f1", "f2"):
            if getattr(self, name) < 0:
                raise InputError(f"{name} must be nonnegative, got {getattr(self, name)!r}")
        if self.f1 < self.f2:
            raise InputError(f"f1 >= f2 required, got f1={self.f1!r}, f2={self.f2!r}")
        if min(self.r) < 0:
            raise InputError("row sums must be nonnegative")
        low = [j + 1 for j, rj in enumerate(self.r[:-1]) if rj < self.r[-1]]
        if low:
            raise InputError(f"r_j >= r_n fails for j in {low}")

    @classmethod
    def build(cls, d: float, f1: float, f2: float, r: Sequence[float]) -> "MnParams":
        r = tuple(float(x) for x in r)
        return cls(len(r), float(d), float(f1), float(f2), r)

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "d": self.d, "f1": self.f1, "f2": self.f2, "r": list(self.r)}


def mn_matrix(params: MnParams) -> np.ndarray:
    n, d, f1, f2 = params.n, params.d, params.f1, params.f2
    r = np.array(params.r)
    m = np.zeros((n, n))
    m[:-1, :-1] = f1
    np.fill_diagonal(m[:-1, :-1], d)
    m[:-1, -1] = r[:-1] - d - (n - 2) * f1
    m[-1, :-1] = f2
    m[-1, -1] = r[-1] - (n - 1) * f2
    if not check_rooted_matrix(m).rooted:
        raise ConsistencyError(f"M_n built from {params.to_dict()} is not rooted")
    return m


def mn_rho_closed_form(params: MnParams) -> float:
    """rho_r(M_n) in closed form."""
    k = params.n - 2
    r_n = params.r[-1]
    spread = sum(ri - r_n for ri in params.r[:-1])
    head = r_n + params.d - params.f2 + k * (params.f1 - params.f2)
    disc = (r_n - params.d + params.f2 - k * (params.f1 - params.f2)) ** 2 + 4.0 * params.f2 * spread
    return 0.5 * head + 0.5 * math.sqrt(max(disc, 0.0))


def _quadratic_bound(r_l: float, d: float, f: float, spread: float) -> float:
    return 0.5 * (r_l + d - f + math.sqrt(max((r_l - d + f) ** 2 + 4.0 * f * spread, 0.0)))


# ============================================================================
# ROW-SUM BOUNDS
# ============================================================================

def _sorted_by_row_sum(c: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    r = row_sums(c)
    perm = np.argsort(-r, kind="stable")
    return perm, c[np.ix_(perm, perm)], r[perm]


def _check_ell(ell: int, n: int) -> int:
    if not isinstance(ell, (int, np.integer)) or not 1 <= ell <= n:
        raise InputError(f"l must satisfy 1 <= l <= n={n}, got {ell!r}")
    return int(ell)


def _max_offdiag(c: np.ndarray) -> float:
    if c.shape[0] < 2:
        return 0.0
    mask = ~np.eye(c.shape[0], dtype=bool)
    return float(c[mask].max())


@dataclass
class DuanZhouReport:
    bound: float
    ell: int
    d: float
    f: float
    permutation: List[int]
    sorted_row_sums: List[float]
    equality: EqualityVerdict
    t: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bound": self.bound,
            "l": self.ell,
            "d": self.d,
            "f": self.f,
            "permutation": self.permutation,
            "sorted_row_sums": self.sorted_row_sums,
            "equality": self.equality.value,
            "t": self.t,
        }


def duan_zhou_bound(c, ell: int) -> DuanZhouReport:
    """
    Row-sum bound with rows permuted into non-increasing row-sum order.

    Equality (C irreducible): all row sums equal, or with t the least index
    whose row sum is r_l, r_t = r_n, c_ii = d for i < t and c_ij = f for
    every i != j with j < t.
    """
    c = as_square(c, "C")
    require_nonnegative(c, "C")
    n = c.shape[0]
    ell = _check_ell(ell, n)
    perm, cs, rs = _sorted_by_row_sum(c)
    d = float(np.max(np.diag(cs)))
    f = _max_offdiag(cs)
    r_l = float(rs[ell - 1])
    spread = float(np.sum(rs[:ell - 1] - r_l))
    bound = _quadratic_bound(r_l, d, f, spread)

    tol = default_tolerance(c)
    t = int(np.flatnonzero(np.abs(rs - r_l) <= tol)[0])
    if not is_irreducible(c):
        verdict = EqualityVerdict.UNDETERMINED
    elif abs(rs[0] - rs[-1]) <= tol:
        verdict = EqualityVerdict.EQUALITY
    else:
        head = cs[:, :t]
        off = ~np.eye(n, dtype=bool)[:, :t]
        holds = (
            abs(rs[t] - rs[-1]) <= tol
            and np.all(np.abs(np.diag(cs)[:t] - d) <= tol)
            and np.all(np.abs(head[off] - f) <= tol)
        )
        verdict = EqualityVerdict.EQUALITY if holds else EqualityVerdict.STRICT

    return DuanZhouReport(
        bound=bound,
        ell=ell,
        d=d,
        f=f,
        permutation=[int(i) + 1 for i in perm],
        sorted_row_sums=[float(x) for x in rs],
        equality=verdict,
        t=t + 1,
    )


@dataclass
class RefinedDuanZhouReport:
    bound: float
    ell: int
    d: float
    f1: float
    f2: float
    restricted_bound: float
    split_bound: float
    duan_zhou: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bound": self.bound,
            "l": self.ell,
            "d": self.d,
            "f1": self.f1,
            "f2": self.f2,
            "restricted_bound": self.restricted_bound,
            "split_bound": self.split_bound,
            "duan_zhou_bound": self.duan_zhou,
        }


def refined_duan_zhou(c, ell: int) -> RefinedDuanZhouReport:
    """
    Column-restricted row-sum bound, never above duan_zhou_bound(c, ell).

    d, f1 come from the first l-1 columns of the sorted matrix and f2 from
    rows l..n of those columns. Two valid forms are evaluated and the smaller
    is returned: the quadratic bound with (d, f1), and rho_r of M_l built
    with separate f1 and f2.
    """
    c = as_square(c, "C")
    require_nonnegative(c, "C")
    n = c.shape[0]
    ell = _check_ell(ell, n)
    _, cs, rs = _sorted_by_row_sum(c)

    if ell == 1:
        d = f1 = f2 = 0.0
    else:
        head = cs[:, :ell - 1]
        off = ~np.eye(n, dtype=bool)[:, :ell - 1]
        d = float(np.max(np.diag(cs)[:ell - 1]))
        f1 = float(head[off].max()) if off.any() else 0.0
        f2 = float(cs[ell - 1:, :ell - 1].max())

    r_l = float(rs[ell - 1])
    spread = float(np.sum(rs[:ell - 1] - r_l))
    restricted = _quadratic_bound(r_l, d, f1, spread)
    k = ell - 2
    split = 0.5 * (r_l + d - f2 + k * (f1 - f2)) + 0.5 * math.sqrt(
        max((r_l - d + f2 - k * (f1 - f2)) ** 2 + 4.0 * f2 * spread, 0.0)
    )
    bound = min(restricted, split)

    dz = duan_zhou_bound(c, ell).bound
    if bound > dz + CHAIN_REL_TOL * (1.0 + dz):
        raise ConsistencyError(f"refined bound {bound!r} exceeds the unrefined bound {dz!r} at l={ell}")
    return RefinedDuanZhouReport(bound, ell, d, f1, f2, restricted, split, dz)


def best_duan_zhou(c) -> DuanZhouReport:
    """Smallest duan_zhou_bound over l = 1..n (never above the largest row sum)."""
    c = as_square(c, "C")
    reports = [duan_zhou_bound(c, ell) for ell in range(1, c.shape[0] + 1)]
    return min(reports, key=lambda rep: rep.bound)


# ============================================================================
# ENTRY-SUM BOUNDS
# ============================================================================

@dataclass
class EntrySumReport:
    bound: float
    m: float
    d: float
    f: float
    equality: bool
    k: Optional[int] = None
    permutation: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bound": self.bound,
            "m": self.m,
            "d": self.d,
            "f": self.f,
            "equality": self.equality,
            "k": self.k,
            "permutation": self.permutation,
        }


def entrysum_bound(c) -> EntrySumReport:
    """
    rho(C) <= (d - f + sqrt((d - f)^2 + 4 m f)) / 2 with m the entry sum.

    Equality iff C is permutation-similar to (f J_k + (d - f) I_k) (+) O; with
    f = 0 the bound is d = rho(C) itself.
    """
    c = as_square(c, "C")
    require_nonnegative(c, "C")
    n = c.shape[0]
    total = float(c.sum())
    d = float(np.max(np.diag(c)))
    f = _max_offdiag(c)

    if f == 0:
        return EntrySumReport(d, total, d, f, True, None, list(range(1, n + 1)))

    bound = 0.5 * (d - f + math.sqrt((d - f) ** 2 + 4.0 * total * f))
    support = [i for i in range(n) if c[i, :].any() or c[:, i].any()]
    rest = [i for i in range(n) if i not in support]
    perm = support + rest
    k = len(support)
    pc = c[np.ix_(perm, perm)]
    target = np.full((k, k), f)
    np.fill_diagonal(target, d)
    equality = bool(np.array_equal(pc[:k, :k], target))
    return EntrySumReport(bound, total, d, f, equality, k, [i + 1 for i in perm])


def stanley_bound(e: int) -> float:
    """Upper bound (-1 + sqrt(1 + 8e)) / 2 for a (0,1)-matrix with e ones."""
    if e < 0:
        raise InputError(f"number of ones must be nonnegative, got {e!r}")
    return 0.5 * (-1.0 + math.sqrt(1.0 + 8.0 * e))


def stanley_bound_exact(e: int) -> Optional[int]:
    """Integer k - 1 when e = k(k-1)/2 (1 + 8e a perfect square), else None."""
    if e < 0:
        raise InputError(f"number of ones must be nonnegative, got {e!r}")
    root = math.isqrt(1 + 8 * e)
    if root * root != 1 + 8 * e:
        return None
    return (root - 1) // 2
