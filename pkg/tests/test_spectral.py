"""
Spectral Tests

PURPOSE:
    Verify the Perron root solver, its dense fallback, the largest real
    eigenvalue of rooted and general matrices, and the transpose-quotient
    reduction.

WHAT THIS FILE PROTECTS AGAINST:
    - Collatz-Wielandt brackets that do not contain the reported value
    - Reducible inputs (zero rows, triangular blocks) hanging or misreported
    - rho_r silently returning a complex eigenvalue's real part
    - The transpose-quotient shortcut disagreeing with the direct value
    - Dense eigenvalues that change under a change of basis
"""

import math
import os
import sys

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.errors import HypothesisError, NegativeEntryError, NotRootedError
from src.core.partition import Partition
from src.core.textio import read_matrix
from src.spectral.dense import companion_matrix, dense_eigenvalues, geometric_multiplicity
from src.spectral.power import SpectralMethod, left_eigenvector_nonneg, spectral_radius_nonneg
from src.spectral.rho_r import reduce_by_transpose_quotient, rho_r_general, rho_r_rooted

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")

SQRT17 = math.sqrt(17.0)


def load(name: str) -> np.ndarray:
    return read_matrix(os.path.join(FIXTURES, name))


# ============================================================================
# TEST CLASS 1: PERRON ROOT
# ============================================================================

class TestSpectralRadius:
    """spectral_radius_nonneg and its certified bracket."""

    def test_all_ones(self):
        res = spectral_radius_nonneg(load("j3.txt"))
        assert res.value == pytest.approx(3.0, abs=1e-12)
        np.testing.assert_allclose(res.eigenvector, [1 / 3, 1 / 3, 1 / 3], atol=1e-12)

    def test_comparison_example(self):
        assert spectral_radius_nonneg(load("c3.txt")).value == pytest.approx(4.0, abs=1e-10)

    def test_star_matrix_near_published_value(self):
        assert spectral_radius_nonneg(load("c5_star.txt")).value == pytest.approx(19.4, abs=0.05)

    def test_bracket_contains_value(self):
        """
        PROTECTS AGAINST: Reporting a value outside its own certificate.
        """
        rng = np.random.default_rng(3)
        for _ in range(20):
            c = rng.random((6, 6))
            res = spectral_radius_nonneg(c)
            assert res.cw_lower <= res.value <= res.cw_upper
            assert res.value == pytest.approx(np.max(np.abs(np.linalg.eigvals(c))), rel=1e-9)

    def test_zero_row_uses_dense_fallback(self):
        """
        PROTECTS AGAINST: Power iteration stalling forever on a reducible input.
        """
        c = np.array([[2.0, 1.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.0]])
        res = spectral_radius_nonneg(c, max_iter=5000)
        assert res.value == pytest.approx(2.0, abs=1e-9)
        assert np.all(res.eigenvector >= 0)
        np.testing.assert_allclose(c @ res.eigenvector, res.value * res.eigenvector, atol=1e-8)
        assert res.method in (SpectralMethod.POWER, SpectralMethod.DENSE_FALLBACK)

    def test_zero_matrix(self):
        assert spectral_radius_nonneg(np.zeros((3, 3))).value == pytest.approx(0.0, abs=1e-12)

    def test_negative_entry_rejected(self):
        with pytest.raises(NegativeEntryError):
            spectral_radius_nonneg([[1, -1], [0, 1]])

    def test_left_vector_is_positive_for_irreducible(self):
        c = load("c3.txt")
        res = left_eigenvector_nonneg(c)
        assert res.value == pytest.approx(4.0, abs=1e-10)
        assert np.all(res.eigenvector > 0)
        np.testing.assert_allclose(res.eigenvector @ c, 4.0 * res.eigenvector, atol=1e-8)

    def test_left_and_right_agree_for_symmetric(self):
        rng = np.random.default_rng(5)
        a = rng.random((5, 5))
        c = a + a.T
        assert left_eigenvector_nonneg(c).value == pytest.approx(spectral_radius_nonneg(c).value, abs=1e-10)


# ============================================================================
# TEST CLASS 2: LARGEST REAL EIGENVALUE
# ============================================================================

class TestRhoR:

    def test_intro_matrix(self):
        rho = rho_r_rooted([[5, 2], [4, -1]])
        assert rho.value == pytest.approx(2.0 + SQRT17, abs=1e-10)

    def test_worked_example_m(self):
        assert rho_r_rooted(load("m5.txt")).value == pytest.approx(18.6936, abs=1e-3)

    def test_degenerate_quotient_form(self):
        assert rho_r_rooted([[2, 1], [1, 0]]).value == pytest.approx(1.0 + math.sqrt(2.0), abs=1e-10)

    def test_rooted_eigenvector(self):
        """v' = (2,1,1)/4 for C'_r of the comparison example."""
        rho = rho_r_rooted(load("c3_right.txt"))
        assert rho.value == pytest.approx(4.0, abs=1e-10)
        np.testing.assert_allclose(rho.eigenvector, [0.5, 0.25, 0.25], atol=1e-9)

    def test_defective_rooted_matrix(self):
        """C'_l has a double eigenvalue 3 with a single eigenvector (1,0,0)."""
        rho = rho_r_rooted(load("c3_left.txt"))
        assert rho.value == pytest.approx(3.0, abs=1e-9)
        np.testing.assert_allclose(rho.eigenvector, [1.0, 0.0, 0.0], atol=1e-8)

    def test_not_rooted_raises_with_check(self):
        with pytest.raises(NotRootedError) as info:
            rho_r_rooted([[0, 1], [2, 0]])
        assert info.value.check is not None and not info.value.check.rooted

    def test_general_absent_for_rotation(self):
        rho = rho_r_general(load("rotation.txt"))
        assert rho.value is None
        assert not rho.present

    def test_general_diagonal(self):
        assert rho_r_general(np.diag([3.0, -5.0])).value == pytest.approx(3.0)

    def test_general_agrees_with_rooted(self):
        """
        PROTECTS AGAINST: The shifted Perron computation drifting from the dense spectrum.
        """
        m = load("m5.txt")
        assert rho_r_general(m).value == pytest.approx(rho_r_rooted(m).value, abs=1e-8)


# ============================================================================
# TEST CLASS 3: DENSE SOLVER
# ============================================================================

class TestDense:

    def test_identity(self):
        assert dense_eigenvalues(np.eye(3)) == [(1.0, 0.0)] * 3

    def test_rotation_is_complex(self):
        pairs = dense_eigenvalues(load("rotation.txt"))
        assert sorted(round(im, 12) for _, im in pairs) == [-1.0, 1.0]

    def test_companion_roots(self):
        """x^3 - 2x^2 - x + 1 has largest root about 2.2470."""
        pairs = dense_eigenvalues(companion_matrix([1, -2, -1, 1]))
        assert pairs[0][0] == pytest.approx(2.2469796, abs=1e-6)

    def test_geometric_multiplicity_of_defective_root(self):
        assert geometric_multiplicity(load("c3_left.txt"), 3.0) == 1
        assert geometric_multiplicity(np.eye(2), 1.0) == 2

    def test_similarity_invariant(self):
        """
        PROTECTS AGAINST: Eigenvalues that depend on the basis the matrix is written in.
        """
        rng = np.random.default_rng(23)
        basis, _ = np.linalg.qr(rng.normal(size=(4, 4)))
        c = basis @ np.diag([5.0, 2.0, -1.0, -3.0]) @ basis.T
        for _ in range(10):
            p = np.eye(4) + 0.3 * rng.normal(size=(4, 4))
            similar = p @ c @ np.linalg.inv(p)
            np.testing.assert_allclose(dense_eigenvalues(similar), dense_eigenvalues(c), atol=1e-8)


# ============================================================================
# TEST CLASS 4: TRANSPOSE-QUOTIENT REDUCTION
# ============================================================================

class TestTransposeReduction:

    def test_mn_example(self):
        m3 = [[0, 1, 1], [1, 0, 1], [1, 1, -2]]
        red = reduce_by_transpose_quotient(m3, Partition.from_one_based(3, [[1, 2], [3]]))
        np.testing.assert_allclose(red.quotient, [[1, 1], [2, -2]], atol=1e-12)
        assert red.rho_r.value == pytest.approx((-1.0 + SQRT17) / 2.0, abs=1e-10)

    def test_identity_partition_order_two(self):
        m = [[5, 2], [4, -1]]
        red = reduce_by_transpose_quotient(m, Partition.identity(2))
        assert red.rho_r.value == pytest.approx(red.direct.value, abs=1e-10)

    def test_last_block_must_be_singleton(self):
        with pytest.raises(HypothesisError):
            reduce_by_transpose_quotient([[0, 1, 1], [1, 0, 1], [1, 1, -2]],
                                         Partition.from_one_based(3, [[1], [2, 3]]))


# ============================================================================
# TEST CLASS 5: BOUND BY A ROOTED 2x2
# ============================================================================

class TestIntroMatrixBound:

    def test_random_dominated_matrices(self):
        """
        Every nonnegative C with c11 <= 5, c21 <= 4, r1 <= 7, r2 <= 3 has
        rho(C) <= rho_r([[5, 2], [4, -1]]) = 2 + sqrt(17).
        """
        rng = np.random.default_rng(17)
        bound = rho_r_rooted([[5, 2], [4, -1]]).value
        for _ in range(200):
            c11 = rng.uniform(0.0, 5.0)
            c12 = rng.uniform(0.0, 7.0 - c11)
            c21 = rng.uniform(0.0, 3.0)
            c22 = rng.uniform(0.0, 3.0 - c21)
            c = np.array([[c11, c12], [c21, c22]])
            assert spectral_radius_nonneg(c).value <= bound + 1e-10

    def test_corner_matrix(self):
        """[[5, 2], [3, 0]] meets every constraint with equality and has rho = 6."""
        c = np.array([[5.0, 2.0], [3.0, 0.0]])
        assert spectral_radius_nonneg(c).value == pytest.approx(6.0, abs=1e-10)
        assert 6.0 < 2.0 + SQRT17
