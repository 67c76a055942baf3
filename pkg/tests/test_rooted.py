"""
Rooted Vector and Rooted Matrix Tests

PURPOSE:
    The Q-similarity turns a rooted matrix into a nonnegative one; every
    rho_r value in the toolkit depends on deciding rootedness correctly and
    on the shift witness being genuine.

WHAT THIS FILE PROTECTS AGAINST:
    - Non-rooted matrices accepted (bounds certified by a wrong witness)
    - Rooted matrices rejected (bounds refused that should be established)
    - Minimal shift d computed too small (negative transform entries)
    - Shifting C' by dI changing anything but the eigenvalue and the diagonal
"""

import os
import sys

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.errors import DimensionError
from src.rooted.rooted import (
    check_rooted_matrix, is_rooted_matrix, is_rooted_vector, is_strictly_rooted_vector,
    q_matrix, q_matrix_inverse, q_transform, verify_rooted_witness,
)
from src.spectral.rho_r import rho_r_rooted

M5 = [[7, 6, 11], [12, 2, 6], [4, 4, 5]]
M_INTRO = [[5, 2], [4, -1]]


# ============================================================================
# TEST CLASS 1: Q MATRICES
# ============================================================================

class TestQMatrix:

    @pytest.mark.parametrize("n,expected", [
        (2, [[1, 1], [0, 1]]),
        (3, [[1, 0, 1], [0, 1, 1], [0, 0, 1]]),
    ])
    def test_q_matrix(self, n, expected):
        np.testing.assert_array_equal(q_matrix(n), expected)

    def test_inverse(self):
        np.testing.assert_array_equal(q_matrix(5) @ q_matrix_inverse(5), np.eye(5))

    def test_rejects_empty_order(self):
        with pytest.raises(DimensionError):
            q_matrix(0)


# ============================================================================
# TEST CLASS 2: ROOTED VECTORS
# ============================================================================

class TestRootedVectors:

    @pytest.mark.parametrize("v,rooted,strict", [
        ((2, 1, 1), True, False),
        ((1, 0, 0), True, False),
        ((1, 2, 3), False, False),
        ((3, 2, 1), True, True),
    ])
    def test_classification(self, v, rooted, strict):
        assert is_rooted_vector(v) is rooted
        assert is_strictly_rooted_vector(v) is strict


# ============================================================================
# TEST CLASS 3: ROOTED MATRICES
# ============================================================================

class TestRootedMatrix:
    """Rootedness decision, minimal witness and violation reports."""

    def test_q_transform_of_intro_matrix(self):
        np.testing.assert_array_equal(q_transform(M_INTRO), [[1, 4], [4, 3]])

    def test_q_transform_is_similarity(self):
        """
        PROTECTS AGAINST: A transform that changes the spectrum.
        """
        rng = np.random.default_rng(11)
        c = rng.normal(size=(5, 5))
        before = np.sort_complex(np.linalg.eigvals(c))
        after = np.sort_complex(np.linalg.eigvals(q_transform(c)))
        np.testing.assert_allclose(after, before, atol=1e-9)

    def test_identity_transform(self):
        np.testing.assert_array_equal(q_transform(np.eye(3)), np.eye(3))

    def test_intro_matrix_rooted_with_zero_shift(self):
        cert = is_rooted_matrix(M_INTRO)
        assert cert is not None
        assert verify_rooted_witness(M_INTRO, 0.0)
        assert cert.d <= 0.0

    def test_worked_example_minimal_shift(self):
        """m_22 = 2 < m_32 = 4 forces d = 2."""
        check = check_rooted_matrix(M5)
        assert check.rooted
        assert check.d == pytest.approx(2.0)
        assert np.all(check.certificate.transformed >= 0)
        assert not verify_rooted_witness(M5, 1.0), "a shift below d* must not certify rootedness"

    def test_row_sum_violation_reported(self):
        """
        PROTECTS AGAINST: Accepting [[0,1],[2,0]] whose row sums (1,2) are not rooted.
        """
        check = check_rooted_matrix([[0, 1], [2, 0]])
        assert not check.rooted
        assert check.certificate is None
        conditions = {v["condition"] for v in check.violations}
        assert conditions == {"row-sum-rooted"}
        assert check.violations[0]["row"] == 1

    def test_column_violation_reported(self):
        check = check_rooted_matrix([[5, 0, 1], [0, 5, 1], [1, 0, 0]])
        assert not check.rooted
        assert any(v["condition"] == "column-rooted" and v["row"] == 2 and v["col"] == 1
                   for v in check.violations)

    def test_negative_bottom_row_reported(self):
        check = check_rooted_matrix([[3, 0], [-1, 2]])
        assert any(v["condition"] == "bottom-row-nonnegative" for v in check.violations)

    def test_order_one_always_rooted(self):
        assert check_rooted_matrix([[-4.0]]).rooted

    def test_to_dict_keys(self):
        assert set(check_rooted_matrix(M5).to_dict()) == {"rooted", "d", "violations"}


# ============================================================================
# TEST CLASS 4: SHIFTS AND ROOTED EIGENVECTORS
# ============================================================================

class TestShiftInvariance:

    @pytest.mark.parametrize("cp", [M_INTRO, M5], ids=["intro", "m5"])
    def test_eigenvector_strictly_rooted(self, cp):
        """
        PROTECTS AGAINST: A rooted eigenvector that loses its rooted shape
        when the transformed matrix is irreducible.
        """
        rho = rho_r_rooted(cp)
        assert is_strictly_rooted_vector(rho.eigenvector)
        assert np.all(rho.eigenvector > 0)

    @pytest.mark.parametrize("d", [-3.0, 0.5, 2.0, 10.0])
    def test_shifted_eigenpair(self, d):
        cp = np.array(M5, dtype=float)
        rho = rho_r_rooted(cp)
        v = rho.eigenvector
        n = cp.shape[0]
        base = cp @ v - rho.value * v
        shifted = (cp + d * np.eye(n)) @ v - (rho.value + d) * v
        np.testing.assert_allclose(shifted, base, atol=1e-10)
        np.testing.assert_allclose(shifted, 0.0, atol=1e-8)
        assert rho_r_rooted(cp + d * np.eye(n)).value == pytest.approx(rho.value + d, abs=1e-9)

    def test_q_transform_commutes_with_shift(self):
        rng = np.random.default_rng(5)
        for n in (2, 3, 6):
            cp = rng.normal(size=(n, n))
            for d in rng.uniform(-4.0, 4.0, size=5):
                np.testing.assert_allclose(
                    q_transform(cp + d * np.eye(n)), q_transform(cp) + d * np.eye(n), atol=1e-12
                )

    def test_minimal_shift_moves_with_diagonal(self):
        """Adding dI lowers the minimal witness by d."""
        base = check_rooted_matrix(M5).d
        shifted = check_rooted_matrix(np.array(M5, dtype=float) + 1.5 * np.eye(3)).d
        assert shifted == pytest.approx(base - 1.5, abs=1e-12)
