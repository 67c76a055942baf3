"""
Largest real eigenvalue rho_r and the transpose-quotient reduction.

    rho_r_rooted    rho(Q^-1 (C' + dI) Q) - d for a rooted C'; the rooted
                    eigenvector is v' = Q u with u the Perron vector
    rho_r_general   max real eigenvalue from the dense solver; absent when
                    C has no real eigenvalue (reported as "infinity")
    reduce_by_transpose_quotient
                    rho_r(C') = rho_r(Pi(C'^T)) when Pi is equitable for
                    C'^T and its last block is {n}
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from src.core.errors import ConsistencyError, HypothesisError, NotRootedError
from src.core.matrix import as_square, is_equitable, require_partition_fits
from src.core.partition import Partition
from src.rooted.rooted import RootedCertificate, check_rooted_matrix, q_matrix
from src.spectral.dense import dense_eigenpairs
from src.spectral.power import DEFAULT_MAX_ITER, DEFAULT_TOL, SpectralResult, spectral_radius_nonneg

logger = logging.getLogger(__name__)

REAL_EIGENVALUE_REL_TOL = 1e-9
REDUCTION_REL_TOL = 1e-8


@dataclass
class RhoR:
    """Largest real eigenvalue; value None encodes the 'no real eigenvalue' convention."""

    value: Optional[float]
    eigenvector: Optional[np.ndarray] = None
    certificate: Optional[RootedCertificate] = None
    method: str = "rooted"
    spectral: Optional[SpectralResult] = None

    @property
    def present(self) -> bool:
        return self.value is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "eigenvector": None if self.eigenvector is None else self.eigenvector.tolist(),
            "rooted": self.certificate is not None,
            "d": None if self.certificate is None else self.certificate.d,
            "method": self.method,
        }


def rho_r_rooted(cp, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> RhoR:
    cp = as_square(cp, "C'")
    check = check_rooted_matrix(cp)
    if not check.rooted:
        first = check.violations[0]
        raise NotRootedError(
            f"matrix is not rooted: {first['condition']} fails at row {first['row']}",
            check,
        )
    cert = check.certificate
    n = cp.shape[0]
    if n == 1:
        return RhoR(float(cp[0, 0]), np.ones(1), cert, "rooted", None)

    res = spectral_radius_nonneg(cert.transformed, tol, max_iter)
    v_prime = q_matrix(n) @ res.eigenvector
    v_prime = v_prime / v_prime.sum()
    return RhoR(res.value - cert.d, v_prime, cert, "rooted", res)


def rho_r_general(c) -> RhoR:
    c = as_square(c, "C")
    values, vectors = dense_eigenpairs(c)
    threshold = REAL_EIGENVALUE_REL_TOL * (1.0 + float(np.linalg.norm(c, 1)))
    real_idx = np.flatnonzero(np.abs(values.imag) <= threshold)
    if real_idx.size == 0:
        logger.warning("[SPECTRAL] Matrix has no real eigenvalue; rho_r is infinite by convention")
        return RhoR(None, None, None, "dense", None)

    best = real_idx[int(np.argmax(values.real[real_idx]))]
    x = vectors[:, best].real
    x = x / np.sum(np.abs(x))
    nonzero = np.flatnonzero(np.abs(x) > 1e-15)
    if nonzero.size and x[nonzero[0]] < 0:
        x = -x
    return RhoR(float(values.real[best]), x, None, "dense", None)


@dataclass
class TransposeReduction:
    quotient: np.ndarray
    rho_r: RhoR
    direct: RhoR

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quotient": self.quotient.tolist(),
            "rho_r": self.rho_r.value,
            "direct_rho_r": self.direct.value,
        }


def reduce_by_transpose_quotient(cp, p: Partition, tol: float = DEFAULT_TOL,
                                 max_iter: int = DEFAULT_MAX_ITER) -> TransposeReduction:
    """Shrink a rooted C' to Pi(C'^T) without changing rho_r; both values are cross-checked."""
    cp = as_square(cp, "C'")
    require_partition_fits(cp, p, "C'")
    n = cp.shape[0]
    if p.last_block != (n - 1,):
        raise HypothesisError(f"last block must be {{{n}}}, got {[j + 1 for j in p.last_block]}")

    direct = rho_r_rooted(cp, tol, max_iter)
    eq = is_equitable(cp.T, p)
    if not eq.is_equitable:
        first = eq.violations[0]
        raise HypothesisError(
            f"partition is not equitable for C'^T: row {first['row']}, block {first['block']}",
            eq,
        )

    reduced = rho_r_general(eq.quotient)
    scale = 1.0 + abs(direct.value)
    if reduced.value is None or abs(reduced.value - direct.value) > REDUCTION_REL_TOL * scale:
        raise ConsistencyError(
            f"transpose quotient gives rho_r={reduced.value!r}, direct computation gives {direct.value!r}"
        )
    return TransposeReduction(eq.quotient, reduced, direct)
