"""
Partition bounds on the spectral radius via rooted modified-quotient matrices.

UPPER BOUND:
    Given nonnegative C, an ordered partition Pi = (pi_1, ..., pi_l) and a
    rooted l x l matrix M with

        max_{i in pi_a} sum_{j in pi_b} c_ij <= m_ab     (b <= l-1)
        max_{i in pi_a} r_i                  <= sum_c m_ac

    we have rho(C) <= rho_r(M).

LOWER BOUND (dual):
    Same shape with every max replaced by min and <= by >=, giving
    rho(C) >= rho_r(M). The hypotheses are the row-wise (min) form: every
    row of a block must dominate m_ab, since the construction lowers C one
    row at a time.

EQUALITY DIAGNOSIS (C irreducible, u the rooted eigenvector of M):
    (a) if u_l != 0, every row sum meets its block total sum_c m_ac
    (b) block sums equal m_ab wherever u_b > u_l
    Equality holds iff (a) and (b). When the bottom row of M is positive and
    its row-sum vector is strictly rooted this collapses to "Pi is equitable
    for C and Pi(C) = M", which is reported alongside as a cross-check.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.core.errors import ConsistencyError, DimensionError, HypothesisError
from src.core.graph import is_irreducible
from src.core.matrix import (
    as_square, block_row_sums, default_tolerance, is_equitable,
    require_nonnegative, require_partition_fits, row_sums,
)
from src.core.partition import Partition
from src.rooted.rooted import RootednessCheck, check_rooted_matrix, is_strictly_rooted_vector
from src.spectral.dense import geometric_multiplicity
from src.spectral.power import DEFAULT_MAX_ITER, DEFAULT_TOL, spectral_radius_nonneg
from src.spectral.rho_r import RhoR, rho_r_rooted

logger = logging.getLogger(__name__)

EIGENVECTOR_ZERO_TOL = 1e-10
CROSS_CHECK_SLACK = 1e-9


class BoundDirection(Enum):
    UPPER = "upper"
    LOWER = "lower"


class EqualityVerdict(Enum):
    EQUALITY = "equality"
    STRICT = "strict"
    UNDETERMINED = "undetermined"


# ============================================================================
# HYPOTHESES
# ============================================================================

@dataclass
class HypothesisCheck:
    """Per-(a,b) outcome of the block conditions; indices are 1-based."""

    ok: bool
    direction: BoundDirection
    violations: List[Dict[str, Any]] = field(default_factory=list)
    tolerance: float = 0.0

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "hypothesis_ok": self.ok,
            "direction": self.direction.value,
            "violations": self.violations,
        }


def _validate_bound_inputs(c, p: Partition, m) -> Tuple[np.ndarray, np.ndarray]:
    c = as_square(c, "C")
    require_nonnegative(c, "C")
    require_partition_fits(c, p, "C")
    m = as_square(m, "M")
    if m.shape[0] != p.size:
        raise DimensionError(f"M has order {m.shape[0]} but the partition has {p.size} blocks")
    return c, m


def _check_hypotheses(c: np.ndarray, p: Partition, m: np.ndarray,
                      direction: BoundDirection, tol: Optional[float]) -> HypothesisCheck:
    tol = default_tolerance(c, m) if tol is None else float(tol)
    sums = block_row_sums(c, p)
    r = row_sums(c)
    ell = p.size
    upper = direction is BoundDirection.UPPER
    violations: List[Dict[str, Any]] = []

    for a, block in enumerate(p.blocks):
        idx = np.array(block)
        for b in range(ell - 1):
            col = sums[idx, b]
            k = int(np.argmax(col)) if upper else int(np.argmin(col))
            observed = float(col[k])
            limit = float(m[a, b])
            failed = observed > limit + tol if upper else observed < limit - tol
            if failed:
                violations.append({
                    "a": a + 1, "b": b + 1, "row": int(idx[k]) + 1,
                    "observed": observed, "limit": limit,
                })

        totals = r[idx]
        k = int(np.argmax(totals)) if upper else int(np.argmin(totals))
        observed = float(totals[k])
        limit = float(m[a].sum())
        failed = observed > limit + tol if upper else observed < limit - tol
        if failed:
            violations.append({
                "a": a + 1, "b": "total", "row": int(idx[k]) + 1,
                "observed": observed, "limit": limit,
            })

    return HypothesisCheck(not violations, direction, violations, tol)


def check_upper_hypotheses(c, p: Partition, m, tol: Optional[float] = None) -> HypothesisCheck:
    c, m = _validate_bound_inputs(c, p, m)
    return _check_hypotheses(c, p, m, BoundDirection.UPPER, tol)


def check_lower_hypotheses(c, p: Partition, m, tol: Optional[float] = None) -> HypothesisCheck:
    c, m = _validate_bound_inputs(c, p, m)
    return _check_hypotheses(c, p, m, BoundDirection.LOWER, tol)


# ============================================================================
# CANONICAL M
# ============================================================================

def _canonical(c, p: Partition, upper: bool) -> Tuple[np.ndarray, RootednessCheck]:
    c = as_square(c, "C")
    require_nonnegative(c, "C")
    require_partition_fits(c, p, "C")
    sums = block_row_sums(c, p)
    r = row_sums(c)
    reduce = np.max if upper else np.min
    ell = p.size
    m = np.zeros((ell, ell))
    for a, block in enumerate(p.blocks):
        idx = list(block)
        m[a, :-1] = reduce(sums[idx, :-1], axis=0)
        m[a, -1] = reduce(r[idx]) - m[a, :-1].sum()
    return m, check_rooted_matrix(m)


def canonical_m(c, p: Partition) -> Tuple[np.ndarray, RootednessCheck]:
    """Tightest M meeting the upper-bound hypotheses with equality, plus its rootedness."""
    return _canonical(c, p, upper=True)


def canonical_lower_m(c, p: Partition) -> Tuple[np.ndarray, RootednessCheck]:
    """Block minima and the minimum row sum: the tightest M for the dual bound."""
    return _canonical(c, p, upper=False)


# ============================================================================
# BOUND REPORT
# ============================================================================

@dataclass
class BoundReport:
    """Bound value, the M used, hypothesis status and equality diagnosis."""

    direction: BoundDirection
    bound: float
    m_used: np.ndarray
    hypothesis: HypothesisCheck
    equality: EqualityVerdict
    eigenvector_u: np.ndarray
    partition: Partition
    d: float
    diagnosis: Dict[str, Any] = field(default_factory=dict)

    @property
    def hypothesis_ok(self) -> bool:
        return self.hypothesis.ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "direction": self.direction.value,
            "bound": self.bound,
            "m_used": self.m_used.tolist(),
            "hypothesis_ok": self.hypothesis.ok,
            "violations": self.hypothesis.violations,
            "equality": self.equality.value,
            "diagnosis": self.diagnosis,
            "eigenvector_u": self.eigenvector_u.tolist(),
            "partition": self.partition.to_dict(),
            "d": self.d,
        }


def _diagnose_equality(c: np.ndarray, p: Partition, m: np.ndarray,
                       rho: RhoR) -> Tuple[EqualityVerdict, Dict[str, Any]]:
    diagnosis: Dict[str, Any] = {"irreducible": is_irreducible(c)}
    if not diagnosis["irreducible"]:
        diagnosis["reason"] = "reducible"
        return EqualityVerdict.UNDETERMINED, diagnosis

    ell = p.size
    multiplicity = geometric_multiplicity(m, rho.value) if ell > 1 else 1
    diagnosis["geometric_multiplicity"] = multiplicity
    if multiplicity >= 2:
        diagnosis["reason"] = "rooted eigenvector of M is not unique"
        return EqualityVerdict.UNDETERMINED, diagnosis

    tol = default_tolerance(c, m)
    sums = block_row_sums(c, p)
    r = row_sums(c)
    u = rho.eigenvector
    u_last = float(u[-1])
    failures: List[Dict[str, Any]] = []

    if u_last > EIGENVECTOR_ZERO_TOL:
        for a, block in enumerate(p.blocks):
            target = float(m[a].sum())
            for i in block:
                if abs(r[i] - target) > tol:
                    failures.append({"condition": "a", "row": i + 1, "row_sum": float(r[i]), "target": target})

    active = [b for b in range(ell - 1) if u[b] > u_last + EIGENVECTOR_ZERO_TOL]
    for a, block in enumerate(p.blocks):
        for b in active:
            for i in block:
                if abs(sums[i, b] - m[a, b]) > tol:
                    failures.append({
                        "condition": "b", "row": i + 1, "block": b + 1,
                        "block_sum": float(sums[i, b]), "target": float(m[a, b]),
                    })

    verdict = EqualityVerdict.STRICT if failures else EqualityVerdict.EQUALITY
    diagnosis["active_blocks"] = [b + 1 for b in active]
    diagnosis["u_last_nonzero"] = u_last > EIGENVECTOR_ZERO_TOL
    diagnosis["failures"] = failures

    if ell >= 2 and np.all(m[-1, :-1] > 0) and is_strictly_rooted_vector(row_sums(m)):
        eq = is_equitable(c, p)
        matches = bool(np.allclose(eq.quotient, m, rtol=0.0, atol=tol))
        equitable_equal = eq.is_equitable and matches
        diagnosis["equitable_form"] = {
            "equitable": eq.is_equitable,
            "quotient_matches": matches,
            "equality": equitable_equal,
        }
        if equitable_equal != (verdict is EqualityVerdict.EQUALITY):
            logger.warning(
                f"[BOUNDS] Equitable-form diagnosis ({equitable_equal}) disagrees with "
                f"block-condition diagnosis ({verdict.value})"
            )
    return verdict, diagnosis


def _bound(c, p: Partition, m, direction: BoundDirection, tol: float, max_iter: int,
           diagnose: bool, cross_check: bool) -> BoundReport:
    c, m = _validate_bound_inputs(c, p, m)
    rho = rho_r_rooted(m, tol, max_iter)
    check = _check_hypotheses(c, p, m, direction, None)
    if not check.ok:
        first = check.violations[0]
        logger.info(f"[BOUNDS] {direction.value} hypotheses violated: {len(check.violations)} violation(s)")
        raise HypothesisError(
            f"{direction.value} bound hypotheses fail at block ({first['a']},{first['b']}): "
            f"observed {first['observed']!r} vs limit {first['limit']!r}",
            check,
        )

    if diagnose:
        verdict, diagnosis = _diagnose_equality(c, p, m, rho)
    else:
        verdict, diagnosis = EqualityVerdict.UNDETERMINED, {"reason": "not diagnosed"}

    if cross_check:
        res = spectral_radius_nonneg(c, tol, max_iter)
        diagnosis["rho_c"] = res.value
        if direction is BoundDirection.UPPER and rho.value < res.cw_lower - CROSS_CHECK_SLACK:
            raise ConsistencyError(f"upper bound {rho.value!r} below rho(C) bracket {res.cw_lower!r}")
        if direction is BoundDirection.LOWER and rho.value > res.cw_upper + CROSS_CHECK_SLACK:
            raise ConsistencyError(f"lower bound {rho.value!r} above rho(C) bracket {res.cw_upper!r}")

    return BoundReport(
        direction=direction,
        bound=rho.value,
        m_used=m,
        hypothesis=check,
        equality=verdict,
        eigenvector_u=rho.eigenvector,
        partition=p,
        d=rho.certificate.d,
        diagnosis=diagnosis,
    )


def upper_bound(c, p: Partition, m=None, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                diagnose: bool = True, cross_check: bool = False) -> BoundReport:
    """rho(C) <= rho_r(M); m defaults to canonical_m(c, p)."""
    if m is None:
        m, _ = canonical_m(c, p)
    return _bound(c, p, m, BoundDirection.UPPER, tol, max_iter, diagnose, cross_check)


def lower_bound(c, p: Partition, m=None, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                diagnose: bool = True, cross_check: bool = False) -> BoundReport:
    """rho(C) >= rho_r(M); m defaults to canonical_lower_m(c, p)."""
    if m is None:
        m, _ = canonical_lower_m(c, p)
    return _bound(c, p, m, BoundDirection.LOWER, tol, max_iter, diagnose, cross_check)
