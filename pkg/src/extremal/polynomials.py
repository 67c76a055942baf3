"""
Characteristic polynomials behind the extremal comparisons.

Polynomials are coefficient lists, highest degree first (numpy.polyval
order). With fl = floor(t/2), ce = ceil(t/2):

                 general                               zero trace
    f(x)   x^3 - c x^2 - a x + a(c-s) - s b        x^3 - (c-2)x^2 + (1-c-a)x + a(c-s-1) - s b
    g(x)   f with s = ce, a = fl, b = 0; its largest root is rho(A_0)
    h(x)   x^4 - (c-1)x^3 + (1-c-s)x^2             x^4 - (c-3)x^3 + (4-2c-s)x^2
           + s(c-1-s)x + s(c-1-s)                  + ((c-2)(s-1) - s^2)x - s(s-c+2)

Identities checked numerically:
    f(rho(A_0)) = (fl - a)(rho(A_0) - c') - s(a + b) + fl*ce    (c' = c, or c - 1)
    h(x) - (x+1) g(x) = (c-1-s)x + c - 2s   (c - 1 - 2s)   when t = 2s - 1
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.core.errors import ConsistencyError, InputError
from src.core.partition import Partition
from src.extremal.constructions import ExtremalParams, construct_a0
from src.rooted.rooted import check_rooted_matrix
from src.spectral.dense import companion_matrix, dense_eigenvalues
from src.spectral.power import spectral_radius_nonneg
from src.spectral.rho_r import reduce_by_transpose_quotient

logger = logging.getLogger(__name__)

ROOT_MATCH_TOL = 1e-9
IDENTITY_TOL = 1e-8
IDENTITY_SAMPLES = (-2.0, -0.5, 0.0, 1.0, 2.5, 7.0)


# ============================================================================
# QUOTIENT MATRICES
# ============================================================================

def quotient_matrices_6_1(c: int, s: int, a: float, b: float, zero_trace: bool = False,
                          cross_check: bool = False) -> np.ndarray:
    """
    Equitable quotient of the transposed proof matrix: 2 x 2 when s = c,
    3 x 3 otherwise. With cross_check, rho_r is compared against the
    (c+1) x (c+1) matrix carrying a on row 1 and b on row s+1.
    """
    if not 1 <= s <= c:
        raise InputError(f"s must satisfy 1 <= s <= c={c}, got {s}")
    z = 1 if zero_trace else 0
    if s == c:
        quotient = np.array([[c - z, 1.0], [a, 0.0]], dtype=float)
    else:
        quotient = np.array([
            [s - z, c - s, 1.0],
            [s, c - s - z, 0.0],
            [a, b, 0.0],
        ], dtype=float)

    if cross_check:
        m = statistics_bound_matrix(c, s, a, b, zero_trace)
        if check_rooted_matrix(m).rooted:
            blocks = [list(range(s)), list(range(s, c)), [c]] if s < c else [list(range(c)), [c]]
            reduction = reduce_by_transpose_quotient(m, Partition.from_zero_based(c + 1, blocks))
            if not np.allclose(reduction.quotient, quotient):
                raise ConsistencyError("transpose quotient of the statistics matrix differs from the closed form")
        else:
            logger.debug(f"[EXTREMAL] Statistics matrix for c={c}, s={s}, a={a}, b={b} is not rooted")
    return quotient


def statistics_bound_matrix(c: int, s: int, a: float, b: float, zero_trace: bool = False) -> np.ndarray:
    """Proof-shaped (c+1) x (c+1) matrix whose last column holds only a (row 1) and b (row s+1)."""
    m = np.zeros((c + 1, c + 1))
    m[:c, :c] = 1.0
    if zero_trace:
        np.fill_diagonal(m[:c, :c], 0.0)
    m[0, c] += a
    if s < c:
        m[s, c] += b
    m[c, :s] = 1.0
    return m


# ============================================================================
# POLYNOMIALS
# ============================================================================

def poly_f(c: int, s: int, a: float, b: float, zero_trace: bool = False) -> List[float]:
    if zero_trace:
        return [1.0, -(c - 2.0), 1.0 - c - a, a * (c - s - 1.0) - s * b]
    return [1.0, -float(c), -float(a), a * (c - s) - s * b]


def poly_g(c: int, t: int, zero_trace: bool = False) -> List[float]:
    fl, ce = t // 2, (t + 1) // 2
    return poly_f(c, ce, fl, 0.0, zero_trace)


def poly_h(c: int, s: int, zero_trace: bool = False) -> List[float]:
    if zero_trace:
        return [1.0, -(c - 3.0), 4.0 - 2 * c - s, (c - 2.0) * (s - 1.0) - s * s, -s * (s - c + 2.0)]
    k = s * (c - 1.0 - s)
    return [1.0, -(c - 1.0), 1.0 - c - s, k, k]


def evaluate(coefficients: Sequence[float], x: float) -> float:
    return float(np.polyval(np.asarray(coefficients, dtype=float), x))


def largest_real_root(coefficients: Sequence[float]) -> Optional[float]:
    """Largest real root from the companion-matrix eigenvalues; None if all roots are complex."""
    comp = companion_matrix(coefficients)
    real = [re for re, im in dense_eigenvalues(comp) if abs(im) <= 1e-9 * (1.0 + abs(re))]
    return max(real) if real else None


@dataclass
class PolynomialReport:
    c: int
    t: int
    s: int
    a: float
    b: float
    zero_trace: bool
    f: List[float]
    g: List[float]
    h: List[float]
    roots: Dict[str, Optional[float]]
    rho_a0: float
    f_at_rho_a0: float
    checks: Dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "c": self.c, "t": self.t, "s": self.s, "a": self.a, "b": self.b,
            "zero_trace": self.zero_trace,
            "f": self.f, "g": self.g, "h": self.h,
            "largest_roots": self.roots,
            "rho_a0": self.rho_a0,
            "f_at_rho_a0": self.f_at_rho_a0,
            "checks": self.checks,
        }


def conjecture_polynomials(c: int, t: int, s: int, a: float, b: float,
                           zero_trace: bool = False) -> PolynomialReport:
    params = ExtremalParams.build(c, t, c + 1, zero_trace)
    if t < 2:
        raise InputError(f"the polynomial comparison needs t >= 2, got t={t}")

    f, g, h = poly_f(c, s, a, b, zero_trace), poly_g(c, t, zero_trace), poly_h(c, s, zero_trace)
    roots = {"f": largest_real_root(f), "g": largest_real_root(g), "h": largest_real_root(h)}

    rho_a0 = spectral_radius_nonneg(construct_a0(params)).value
    if roots["g"] is None or abs(roots["g"] - rho_a0) > ROOT_MATCH_TOL:
        raise ConsistencyError(f"largest root of g ({roots['g']!r}) differs from rho(A_0)={rho_a0!r}")

    fl, ce = t // 2, (t + 1) // 2
    shift = c - 1 if zero_trace else c
    f_at = evaluate(f, rho_a0)
    predicted = (fl - a) * (rho_a0 - shift) - s * (a + b) + fl * ce
    checks = {"f_minus_g_identity": abs(f_at - predicted) <= IDENTITY_TOL * (1.0 + abs(predicted))}

    if t == 2 * s - 1:
        tail = c - 1 - 2 * s if zero_trace else c - 2 * s
        gaps = [
            evaluate(h, x) - (x + 1.0) * evaluate(g, x) - ((c - 1 - s) * x + tail)
            for x in IDENTITY_SAMPLES
        ]
        checks["h_identity"] = max(abs(v) for v in gaps) <= IDENTITY_TOL * 1e3

    return PolynomialReport(c, t, s, a, b, zero_trace, f, g, h, roots, rho_a0, f_at, checks)
