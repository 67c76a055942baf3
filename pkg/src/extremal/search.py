"""
Exhaustive desk-scale search for spectral-radius maximizers.

FLOW:
    1. Enumerate S*(n, e) (or, with full=True and n <= 3, every (0,1)-matrix
       with e ones as an oracle for the staircase reduction)
    2. Score each candidate with spectral_radius_nonneg
    3. Group radii into levels (ties within tie_tol are co-maximizers)
    4. Canonicalize the top two levels and compare against A_0 / A'_0

CANONICAL FORM:
    Indices touched by a nonzero entry come first; among all orderings of
    them and both orientations (A, A^T), keep the lexicographically largest
    (row-sum vector, entries). A matrix and any P A P^T or P A^T P^T share it.
"""

import itertools
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from src.core.errors import BudgetExceededError, ConsistencyError
from src.extremal.constructions import ExtremalParams, construct_a0, construct_a0_prime, small_t_extremal
from src.extremal.staircase import check_proof_bound, enumerate_all_binary, enumerate_staircase
from src.spectral.power import DEFAULT_MAX_ITER, DEFAULT_TOL, spectral_radius_nonneg

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1_000_000
TIE_TOL = 1e-10


# ============================================================================
# CANONICAL FORM
# ============================================================================

def _orientation_key(a: np.ndarray) -> Tuple[Tuple[int, ...], Tuple[int, ...], np.ndarray]:
    n = a.shape[0]
    support = [i for i in range(n) if a[i].any() or a[:, i].any()]
    rest = [i for i in range(n) if i not in support]
    sums = a.sum(axis=1)

    # the largest key lists rows by non-increasing row sum; only ties are permuted
    groups: List[List[int]] = []
    for value in sorted({int(sums[i]) for i in support}, reverse=True):
        groups.append([i for i in support if sums[i] == value])

    best_key = None
    best = None
    for parts in itertools.product(*(itertools.permutations(g) for g in groups)):
        order = [i for part in parts for i in part] + rest
        b = a[np.ix_(order, order)]
        key = (tuple(int(x) for x in b.sum(axis=1)), tuple(int(x) for x in b.ravel()))
        if best_key is None or key > best_key:
            best_key, best = key, b
    return best_key[0], best_key[1], best


def canonical_form(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    forward = _orientation_key(a)
    backward = _orientation_key(a.T.copy())
    winner = max(forward, backward, key=lambda k: (k[0], k[1]))
    return winner[2]


def _canonical_bytes(a: np.ndarray) -> bytes:
    return canonical_form(a).astype(np.uint8).tobytes()


# ============================================================================
# SEARCH
# ============================================================================

@dataclass
class SearchReport:
    params: ExtremalParams
    candidates_examined: int
    maximizer: np.ndarray
    max_rho: float
    matches_a0: bool
    matches_a0_prime: bool
    runner_up_rho: Optional[float]
    maximizers: List[np.ndarray] = field(default_factory=list)
    runner_up_forms: List[np.ndarray] = field(default_factory=list)
    runner_up_matches_a0: bool = False
    matches_small_t: Optional[bool] = None
    proof_bound: Optional[Dict[str, Any]] = None
    full_search: Optional[Dict[str, Any]] = None

    @property
    def co_maximizer_count(self) -> int:
        return len(self.maximizers)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "candidates_examined": self.candidates_examined,
            "maximizer": self.maximizer.tolist(),
            "max_rho": self.max_rho,
            "matches_a0": self.matches_a0,
            "matches_a0_prime": self.matches_a0_prime,
            "runner_up_rho": self.runner_up_rho,
            "runner_up_matches_a0": self.runner_up_matches_a0,
            "runner_up_forms": [m.tolist() for m in self.runner_up_forms],
            "maximizers": [m.tolist() for m in self.maximizers],
            "co_maximizer_count": self.co_maximizer_count,
            "matches_small_t": self.matches_small_t,
            "proof_bound": self.proof_bound,
            "full_search": self.full_search,
        }


def _collect(stream: Iterable[np.ndarray], budget: int) -> List[np.ndarray]:
    candidates: List[np.ndarray] = []
    for a in stream:
        if len(candidates) >= budget:
            logger.error(f"[EXTREMAL] Candidate budget {budget} exceeded")
            raise BudgetExceededError(f"more than {budget} candidates; raise --budget to continue")
        candidates.append(a.astype(np.uint8))
    return candidates


def _score(candidates: List[np.ndarray], workers: int, progress: bool,
           tol: float, max_iter: int) -> np.ndarray:
    def radius(a: np.ndarray) -> float:
        return spectral_radius_nonneg(a, tol, max_iter).value

    bar = tqdm(total=len(candidates), desc="scoring", unit="matrix", disable=not progress, file=sys.stderr)
    scores: List[float] = []
    try:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for value in pool.map(radius, candidates):
                    scores.append(value)
                    bar.update(1)
        else:
            for a in candidates:
                scores.append(radius(a))
                bar.update(1)
    finally:
        bar.close()
    return np.array(scores)


def _distinct_forms(members: Iterable[np.ndarray]) -> List[np.ndarray]:
    seen: Dict[bytes, np.ndarray] = {}
    for a in members:
        form = canonical_form(a)
        seen.setdefault(form.astype(np.uint8).tobytes(), form)
    return [seen[k] for k in sorted(seen, reverse=True)]


def _same_forms(forms: List[np.ndarray], targets: List[np.ndarray]) -> bool:
    left = {f.astype(np.uint8).tobytes() for f in forms}
    right = {_canonical_bytes(t) for t in targets}
    return left == right


def verify_conjecture(params: ExtremalParams, budget: int = DEFAULT_BUDGET, workers: int = 1,
                      progress: bool = False, full: bool = False, check_bound: bool = False,
                      tie_tol: float = TIE_TOL, tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER) -> SearchReport:
    n, e, zt = params.n, params.e, params.zero_trace
    logger.info(f"[EXTREMAL] Searching S*({n},{e}) zero_trace={zt} (c={params.c}, t={params.t})")

    candidates = _collect(enumerate_staircase(n, e, zt), budget)
    scores = _score(candidates, workers, progress, tol, max_iter)

    max_rho = float(scores.max())
    top = [candidates[i] for i in np.flatnonzero(scores >= max_rho - tie_tol)]
    lower = scores[scores < max_rho - tie_tol]
    runner_up_rho = float(lower.max()) if lower.size else None
    runner = (
        [candidates[i] for i in np.flatnonzero(np.abs(scores - runner_up_rho) <= tie_tol)]
        if runner_up_rho is not None else []
    )

    maximizers = _distinct_forms(top)
    runner_up_forms = _distinct_forms(runner)

    matches_a0 = runner_up_matches_a0 = False
    matches_small_t = None
    if params.t >= 2:
        a0 = construct_a0(params)
        matches_a0 = _same_forms(maximizers, [a0])
        runner_up_matches_a0 = _same_forms(runner_up_forms, [a0])
    else:
        matches_small_t = all(
            any(np.array_equal(f, canonical_form(s)) for s in small_t_extremal(params)) for f in maximizers
        )

    matches_a0_prime = False
    if not zt and params.c >= 3 and params.t == 2 * params.c - 3:
        matches_a0_prime = _same_forms(maximizers, [construct_a0_prime(params.c, n)])

    report = SearchReport(
        params=params,
        candidates_examined=len(candidates),
        maximizer=maximizers[0],
        max_rho=max_rho,
        matches_a0=matches_a0,
        matches_a0_prime=matches_a0_prime,
        runner_up_rho=runner_up_rho,
        maximizers=maximizers,
        runner_up_forms=runner_up_forms,
        runner_up_matches_a0=runner_up_matches_a0,
        matches_small_t=matches_small_t,
    )

    if check_bound:
        report.proof_bound = _proof_bound_summary(candidates, params)
    if full:
        report.full_search = _full_search_summary(params, budget, max_rho, tie_tol, tol, max_iter)

    logger.info(
        f"[EXTREMAL] {len(candidates)} candidates, max rho={max_rho:.12f}, "
        f"{report.co_maximizer_count} maximizer form(s), matches_a0={matches_a0}"
    )
    return report


def _proof_bound_summary(candidates: List[np.ndarray], params: ExtremalParams) -> Dict[str, Any]:
    checked = not_rooted = 0
    failures: List[List[List[int]]] = []
    for a in candidates:
        result = check_proof_bound(a, params.c, params.zero_trace)
        if not result.rooted:
            not_rooted += 1
            continue
        checked += 1
        if not result.holds:
            failures.append(a.tolist())
    if failures:
        raise ConsistencyError(f"proof bound violated by {len(failures)} candidate(s), first {failures[0]}")
    return {"checked": checked, "not_rooted": not_rooted, "violations": 0}


def _full_search_summary(params: ExtremalParams, budget: int, staircase_max: float,
                         tie_tol: float, tol: float, max_iter: int) -> Dict[str, Any]:
    everything = _collect(enumerate_all_binary(params.n, params.e, params.zero_trace), budget)
    scores = _score(everything, 1, False, tol, max_iter)
    full_max = float(scores.max())
    return {
        "candidates": len(everything),
        "max_rho": full_max,
        "agrees": abs(full_max - staircase_max) <= tie_tol,
    }
