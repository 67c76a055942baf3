"""
Seeded randomized property suites.

Each suite draws its instances from numpy.random.default_rng(seed), so a
(suite, trials, seed) triple always checks the same matrices. A draw that
cannot exercise the property (canonical M not rooted, undetermined verdict)
is redrawn up to MAX_RESAMPLES times; only then is the trial counted as
skipped, never as a pass.

    row-sum-sandwich          r_min <= rho(C) <= r_max
    equitable-rho             rho(C) = rho(Pi(C)) for equitable Pi
    quotient-multiplicative   Pi(AB) = Pi(A) Pi(B) when Pi is equitable for A and B
    rooted-dominance          rho(C) <= rho_r(C') when C is dominated column-wise and in row sums
    bound-dominance           rho(C) <= upper_bound(C, Pi, canonical_m)
    equality-soundness        "equality" verdicts are tight, "strict" verdicts are not
    duan-zhou-chain           refined <= duan_zhou, min_l duan_zhou <= r_1
    mn-closed-form            closed form rho_r(M_n) agrees with the eigensolver
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from src.bounds.families import (
    MnParams, best_duan_zhou, duan_zhou_bound, mn_matrix, mn_rho_closed_form, refined_duan_zhou,
)
from src.bounds.theorem import EqualityVerdict, canonical_m, upper_bound
from src.core.errors import InputError
from src.core.matrix import quotient_matrix, row_sums
from src.core.partition import Partition
from src.rooted.rooted import check_rooted_matrix, q_matrix, q_matrix_inverse
from src.spectral.power import spectral_radius_nonneg
from src.spectral.rho_r import rho_r_rooted

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20240501
MAX_RECORDED_VIOLATIONS = 10
# draws per trial before a trial counts as skipped
MAX_RESAMPLES = 50


@dataclass
class SweepResult:
    name: str
    trials: int
    seed: int
    checked: int = 0
    skipped: int = 0
    violation_count: int = 0
    violations: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def record(self, detail: Dict[str, Any]) -> None:
        self.violation_count += 1
        if len(self.violations) < MAX_RECORDED_VIOLATIONS:
            self.violations.append(detail)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.name,
            "trials": self.trials,
            "seed": self.seed,
            "checked": self.checked,
            "skipped": self.skipped,
            "violation_count": self.violation_count,
            "violations": self.violations,
            "ok": self.ok,
        }


# ============================================================================
# GENERATORS
# ============================================================================

def random_nonneg_matrix(rng: np.random.Generator, n: int, integer: bool = False,
                         density: float = 1.0, high: int = 10) -> np.ndarray:
    if integer:
        c = rng.integers(0, high + 1, size=(n, n)).astype(float)
    else:
        c = rng.uniform(0.0, float(high), size=(n, n))
    if density < 1.0:
        c = c * (rng.random((n, n)) < density)
    return c


def random_partition(rng: np.random.Generator, n: int, ell: Optional[int] = None) -> Partition:
    ell = int(rng.integers(1, n + 1)) if ell is None else ell
    order = rng.permutation(n)
    cuts = np.sort(rng.choice(np.arange(1, n), size=ell - 1, replace=False)) if ell > 1 else []
    return Partition.from_zero_based(n, np.split(order, cuts))


def random_equitable_matrix(rng: np.random.Generator, p: Partition, high: int = 5) -> np.ndarray:
    """Integer matrix for which p is equitable: each row spreads q_ab over block b."""
    c = np.zeros((p.n, p.n))
    for a, rows in enumerate(p.blocks):
        for b, cols in enumerate(p.blocks):
            q_ab = int(rng.integers(0, high + 1))
            for i in rows:
                c[i, list(cols)] = rng.multinomial(q_ab, np.full(len(cols), 1.0 / len(cols)))
    return c


def random_rooted_matrix(rng: np.random.Generator, n: int, high: int = 3) -> np.ndarray:
    """Q T Q^-1 - dI for nonnegative integer T and 0 <= d < 1, rooted by construction."""
    t = rng.integers(0, high + 1, size=(n, n)).astype(float)
    d = float(rng.uniform(0.0, 1.0))
    return q_matrix(n) @ t @ q_matrix_inverse(n) - d * np.eye(n)


def random_dominated_pair(rng: np.random.Generator, n: int, high: float = 5.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    A rooted C' with a nonnegative head and a nonnegative C under it.

    C[:, :n-1] <= C'[:, :n-1] entrywise and r(C) <= r(C'). The diagonal of C'
    may sit below its bottom row, so the rootedness shift d is often positive,
    and the last column of C' may be negative.
    """
    bottom = rng.uniform(0.0, high, size=n - 1)
    head = bottom + rng.uniform(0.0, high, size=(n, n - 1))
    head[-1] = bottom
    diag = np.arange(n - 1)
    head[diag, diag] = rng.uniform(0.0, high, size=n - 1)

    c = np.zeros((n, n))
    c[:, :-1] = head * rng.uniform(0.0, 1.0, size=head.shape)
    c_head_sums = c[:, :-1].sum(axis=1)

    r = np.empty(n)
    r[-1] = c_head_sums[-1] + rng.uniform(0.0, high)
    r[:-1] = np.maximum(r[-1], c_head_sums[:-1]) + rng.uniform(0.0, high, size=n - 1)

    cp = np.zeros((n, n))
    cp[:, :-1] = head
    cp[:, -1] = r - head.sum(axis=1)
    c[:, -1] = (r - c_head_sums) * rng.uniform(0.0, 1.0, size=n)
    return c, cp


def _resample(draw: Callable[[], Any], accept: Callable[[Any], bool]) -> Optional[Any]:
    """First accepted draw within MAX_RESAMPLES attempts, else None."""
    for _ in range(MAX_RESAMPLES):
        sample = draw()
        if accept(sample):
            return sample
    return None


def random_mn_params(rng: np.random.Generator, n: Optional[int] = None) -> MnParams:
    n = int(rng.integers(2, 9)) if n is None else n
    f1 = float(rng.uniform(0.0, 3.0))
    f2 = float(rng.uniform(0.0, f1))
    r_n = float(rng.uniform(0.0, 5.0))
    r = [r_n + float(rng.uniform(0.0, 5.0)) for _ in range(n - 1)] + [r_n]
    return MnParams.build(float(rng.uniform(0.0, 5.0)), f1, f2, r)


# ============================================================================
# SUITES
# ============================================================================

def run_row_sum_sandwich(trials: int, seed: int = DEFAULT_SEED) -> SweepResult:
    rng = np.random.default_rng(seed)
    result = SweepResult("row-sum-sandwich", trials, seed)
    for trial in range(trials):
        n = int(rng.integers(1, 11))
        c = random_nonneg_matrix(rng, n, density=float(rng.uniform(0.2, 1.0)))
        rho = spectral_radius_nonneg(c).value
        r = row_sums(c)
        slack = 1e-9 * (1.0 + float(r.max()))
        result.checked += 1
        if not r.min() - slack <= rho <= r.max() + slack:
            result.record({"trial": trial, "rho": rho, "r_min": float(r.min()), "r_max": float(r.max())})
    return result


def run_equitable_rho(trials: int, seed: int = DEFAULT_SEED) -> SweepResult:
    rng = np.random.default_rng(seed)
    result = SweepResult("equitable-rho", trials, seed)
    for trial in range(trials):
        n = int(rng.integers(2, 10))
        p = random_partition(rng, n)
        c = random_equitable_matrix(rng, p)
        rho_c = spectral_radius_nonneg(c).value
        rho_q = spectral_radius_nonneg(quotient_matrix(c, p)).value
        result.checked += 1
        if abs(rho_c - rho_q) > 1e-8 * (1.0 + rho_c):
            result.record({"trial": trial, "rho": rho_c, "rho_quotient": rho_q})
    return result


def run_quotient_multiplicative(trials: int, seed: int = DEFAULT_SEED) -> SweepResult:
    rng = np.random.default_rng(seed)
    result = SweepResult("quotient-multiplicative", trials, seed)
    for trial in range(trials):
        n = int(rng.integers(2, 10))
        p = random_partition(rng, n)
        a = random_equitable_matrix(rng, p)
        b = random_equitable_matrix(rng, p)
        lhs = quotient_matrix(a @ b, p)
        rhs = quotient_matrix(a, p) @ quotient_matrix(b, p)
        gap = float(np.max(np.abs(lhs - rhs)))
        result.checked += 1
        if gap > 1e-8 * (1.0 + float(np.max(np.abs(lhs)))):
            result.record({"trial": trial, "max_gap": gap})
    return result


def run_rooted_dominance(trials: int, seed: int = DEFAULT_SEED) -> SweepResult:
    rng = np.random.default_rng(seed)
    result = SweepResult("rooted-dominance", trials, seed)
    for trial in range(trials):
        n = int(rng.integers(2, 9))
        c, cp = random_dominated_pair(rng, n)
        rooted = check_rooted_matrix(cp)
        result.checked += 1
        if not rooted.rooted:
            result.record({"trial": trial, "check": "generator", "violations": rooted.violations})
            continue

        rho = spectral_radius_nonneg(c).value
        bound = rho_r_rooted(cp).value
        if rho > bound + 1e-8:
            result.record({"trial": trial, "rho": rho, "rho_r": bound, "d": rooted.d})
    return result


def _canonical_instance(rng: np.random.Generator, max_n: int, draw_matrix) -> Optional[Tuple]:
    """(c, p, m) with a rooted canonical M, resampled up to MAX_RESAMPLES times."""
    def draw():
        n = int(rng.integers(2, max_n + 1))
        p = random_partition(rng, n)
        c = draw_matrix(n, p)
        m, rootedness = canonical_m(c, p)
        return c, p, m, rootedness.rooted

    sample = _resample(draw, lambda s: s[3])
    return None if sample is None else sample[:3]


def run_bound_dominance(trials: int, seed: int = DEFAULT_SEED) -> SweepResult:
    rng = np.random.default_rng(seed)
    result = SweepResult("bound-dominance", trials, seed)
    for trial in range(trials):
        instance = _canonical_instance(
            rng, 12, lambda n, p: random_nonneg_matrix(rng, n, density=float(rng.uniform(0.3, 1.0))),
        )
        if instance is None:
            result.skipped += 1
            continue
        c, p, m = instance
        bound = upper_bound(c, p, m, diagnose=False).bound
        rho = spectral_radius_nonneg(c).value
        result.checked += 1
        if bound < rho - 1e-8:
            result.record({"trial": trial, "n": p.n, "blocks": p.size, "rho": rho, "bound": bound})
    return result


def run_equality_soundness(trials: int, seed: int = DEFAULT_SEED) -> SweepResult:
    """Half the trials use equitable matrices so that equality verdicts occur."""
    rng = np.random.default_rng(seed)
    result = SweepResult("equality-soundness", trials, seed)
    for trial in range(trials):
        equitable = bool(trial % 2)

        def draw_matrix(n, p):
            if equitable:
                return random_equitable_matrix(rng, p, high=4)
            return random_nonneg_matrix(rng, n, integer=True, high=3)

        def draw():
            instance = _canonical_instance(rng, 6, draw_matrix)
            if instance is None:
                return None
            return instance, upper_bound(*instance)

        sample = _resample(draw, lambda s: s is not None and s[1].equality is not EqualityVerdict.UNDETERMINED)
        if sample is None:
            result.skipped += 1
            continue
        (c, p, m), report = sample
        rho = spectral_radius_nonneg(c).value
        result.checked += 1
        if report.equality is EqualityVerdict.EQUALITY and abs(rho - report.bound) > 1e-7:
            result.record({"trial": trial, "verdict": "equality", "rho": rho, "bound": report.bound})
        if report.equality is EqualityVerdict.STRICT and rho >= report.bound - 1e-10:
            result.record({"trial": trial, "verdict": "strict", "rho": rho, "bound": report.bound})
    return result


def run_duan_zhou_chain(trials: int, seed: int = DEFAULT_SEED) -> SweepResult:
    rng = np.random.default_rng(seed)
    result = SweepResult("duan-zhou-chain", trials, seed)
    for trial in range(trials):
        n = int(rng.integers(1, 11))
        c = random_nonneg_matrix(rng, n, density=float(rng.uniform(0.3, 1.0)))
        ell = int(rng.integers(1, n + 1))
        dz = duan_zhou_bound(c, ell)
        refined = refined_duan_zhou(c, ell).bound
        rho = spectral_radius_nonneg(c).value
        r_1 = dz.sorted_row_sums[0]
        slack = 1e-10 * (1.0 + r_1)
        result.checked += 1

        if refined > dz.bound + slack:
            result.record({"trial": trial, "check": "refined<=duan_zhou", "refined": refined, "bound": dz.bound})
        if rho > refined + 1e-8:
            result.record({"trial": trial, "check": "rho<=refined", "rho": rho, "refined": refined})
        if best_duan_zhou(c).bound > r_1 + slack:
            result.record({"trial": trial, "check": "best<=r_1", "r_1": r_1})
        if (ell <= 2 or r_1 - dz.d >= (ell - 2) * dz.f) and dz.bound > r_1 + slack:
            result.record({"trial": trial, "check": "duan_zhou<=r_1", "l": ell, "bound": dz.bound, "r_1": r_1})
    return result


def run_mn_closed_form(trials: int, seed: int = DEFAULT_SEED) -> SweepResult:
    rng = np.random.default_rng(seed)
    result = SweepResult("mn-closed-form", trials, seed)
    for trial in range(trials):
        params = random_mn_params(rng)
        closed = mn_rho_closed_form(params)
        solved = rho_r_rooted(mn_matrix(params)).value
        floor = max(params.d - params.f2, params.r[-1])
        result.checked += 1
        if abs(closed - solved) > 1e-9:
            result.record({"trial": trial, "params": params.to_dict(), "closed": closed, "solved": solved})
        if closed < floor - 1e-12:
            result.record({"trial": trial, "params": params.to_dict(), "closed": closed, "floor": floor})
    return result


SUITES: Dict[str, Callable[[int, int], SweepResult]] = {
    "row-sum-sandwich": run_row_sum_sandwich,
    "equitable-rho": run_equitable_rho,
    "quotient-multiplicative": run_quotient_multiplicative,
    "rooted-dominance": run_rooted_dominance,
    "bound-dominance": run_bound_dominance,
    "equality-soundness": run_equality_soundness,
    "duan-zhou-chain": run_duan_zhou_chain,
    "mn-closed-form": run_mn_closed_form,
}


def run_suite(name: str, trials: int, seed: int = DEFAULT_SEED) -> SweepResult:
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if trials < 1:
        raise InputError(f"trials must be positive, got {trials}")
    result = SUITES[name](int(trials), int(seed))
    level = logging.INFO if result.ok else logging.WARNING
    logger.log(level, f"[BOUNDS] Suite {name}: {result.checked} checked, "
                      f"{result.skipped} skipped, {result.violation_count} violation(s)")
    return result
