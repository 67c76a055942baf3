"""
Partition Bound and Comparison Certificate Tests

PURPOSE:
    The upper and lower partition bounds are the product's main claim. A
    bound reported as established must hold, and the equality verdict must
    match what the eigenvalues actually do.

WHAT THIS FILE PROTECTS AGAINST:
    - Bounds reported when a block condition fails
    - Canonical M drifting from the published worked example
    - "equality" verdicts on strict inequalities (and the reverse)
    - Comparison certificates accepted with a broken condition
"""

import os
import sys

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.bounds.comparison import (
    VERDICT_EQUALITY, VERDICT_INVALID, VERDICT_STRICT, comparison_certificate, rooted_comparison,
)
from src.bounds.theorem import (
    BoundDirection, EqualityVerdict, canonical_lower_m, canonical_m,
    check_lower_hypotheses, check_upper_hypotheses, lower_bound, upper_bound,
)
from src.core.errors import DimensionError, HypothesisError, NegativeEntryError
from src.core.partition import Partition
from src.core.textio import read_matrix, read_partition
from src.rooted.rooted import q_matrix
from src.spectral.power import left_eigenvector_nonneg, spectral_radius_nonneg

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


def load(name: str) -> np.ndarray:
    return read_matrix(os.path.join(FIXTURES, name))


@pytest.fixture
def c5():
    return load("c5.txt")


@pytest.fixture
def pi5():
    return read_partition(os.path.join(FIXTURES, "pi5.json"))


HALVES = Partition.from_one_based(4, [[1, 2], [3, 4]])


# ============================================================================
# TEST CLASS 1: CANONICAL M AND HYPOTHESES
# ============================================================================

class TestHypotheses:
    """Block maxima, row-sum totals and their violations."""

    def test_canonical_m_of_worked_example(self, c5, pi5):
        m, check = canonical_m(c5, pi5)
        np.testing.assert_allclose(m, [[7, 6, 11], [12, 2, 6], [4, 4, 5]], atol=1e-12)
        assert check.rooted
        assert check.d == pytest.approx(2.0)

    def test_canonical_m_meets_its_own_hypotheses(self, c5, pi5):
        m, _ = canonical_m(c5, pi5)
        assert check_upper_hypotheses(c5, pi5, m).ok

    def test_violation_names_block_and_row(self, c5, pi5):
        """
        PROTECTS AGAINST: A bound computed from an M that undercuts a block sum.
        """
        m = np.array([[6, 6, 11], [12, 2, 6], [4, 4, 5]], dtype=float)
        check = check_upper_hypotheses(c5, pi5, m)
        assert not check.ok
        first = check.violations[0]
        assert (first["a"], first["b"], first["row"]) == (1, 1, 2)
        assert first["observed"] == pytest.approx(7.0)

    def test_lower_hypotheses_use_block_minima(self):
        j4 = np.ones((4, 4))
        assert check_lower_hypotheses(j4, HALVES, [[1, 1], [1, 1]]).ok
        assert not check_lower_hypotheses(j4, HALVES, [[3, 1], [1, 1]]).ok

    def test_canonical_lower_m(self):
        m, check = canonical_lower_m(np.ones((4, 4)), HALVES)
        np.testing.assert_array_equal(m, [[2, 2], [2, 2]])
        assert check.rooted

    def test_m_order_must_match_blocks(self, c5, pi5):
        with pytest.raises(DimensionError):
            check_upper_hypotheses(c5, pi5, np.eye(2))

    def test_negative_c_rejected(self):
        with pytest.raises(NegativeEntryError):
            canonical_m([[1, -1], [0, 1]], Partition.identity(2))


# ============================================================================
# TEST CLASS 2: UPPER AND LOWER BOUNDS
# ============================================================================

class TestBounds:

    def test_worked_example_upper_bound(self, c5, pi5):
        report = upper_bound(c5, pi5, cross_check=True)
        assert report.bound == pytest.approx(18.6936, abs=1e-3)
        assert report.d == pytest.approx(2.0)
        assert report.hypothesis_ok
        assert report.equality is EqualityVerdict.STRICT
        assert spectral_radius_nonneg(c5).value <= report.bound

    def test_all_ones_equality(self):
        report = upper_bound(np.ones((4, 4)), HALVES)
        assert report.bound == pytest.approx(4.0, abs=1e-10)
        assert report.equality is EqualityVerdict.EQUALITY

    def test_all_ones_lower_equality(self):
        report = lower_bound(np.ones((4, 4)), HALVES)
        assert report.direction is BoundDirection.LOWER
        assert report.bound == pytest.approx(4.0, abs=1e-10)
        assert report.equality is EqualityVerdict.EQUALITY

    def test_loose_lower_bound_is_strict(self):
        report = lower_bound(np.ones((4, 4)), HALVES, m=[[1, 1], [1, 1]], cross_check=True)
        assert report.bound == pytest.approx(2.0, abs=1e-10)
        assert report.equality is EqualityVerdict.STRICT

    def test_hypothesis_failure_raises_with_check(self, c5, pi5):
        """
        PROTECTS AGAINST: Reporting rho_r(M) as a bound when M is too small.
        """
        m = [[6, 6, 11], [12, 2, 6], [4, 4, 5]]
        with pytest.raises(HypothesisError) as info:
            upper_bound(c5, pi5, m=m)
        assert info.value.check is not None
        assert not info.value.check.ok

    def test_reducible_input_is_undetermined(self):
        c = np.array([[2.0, 1.0], [0.0, 1.0]])
        report = upper_bound(c, Partition.identity(2))
        assert report.equality is EqualityVerdict.UNDETERMINED
        assert report.diagnosis["reason"] == "reducible"

    def test_identity_partition_gives_rho(self):
        """With singleton blocks M = C and the bound is exact."""
        c = load("c3.txt")
        report = upper_bound(c, Partition.identity(3))
        assert report.bound >= spectral_radius_nonneg(c).value - 1e-9

    def test_report_keys(self, c5, pi5):
        keys = set(upper_bound(c5, pi5).to_dict())
        assert keys == {
            "direction", "bound", "m_used", "hypothesis_ok", "violations", "equality",
            "diagnosis", "eigenvector_u", "partition", "d",
        }


# ============================================================================
# TEST CLASS 3: COMPARISON CERTIFICATES
# ============================================================================

class TestComparison:
    """C = [[3,1,1],[1,0,2],[1,1,1]] against its two rooted neighbours."""

    def test_right_neighbour_gives_equality(self):
        cert = rooted_comparison(load("c3.txt"), load("c3_right.txt"), BoundDirection.UPPER)
        assert cert.valid
        assert cert.verdict == VERDICT_EQUALITY
        assert cert.lam == pytest.approx(4.0, abs=1e-8)
        assert cert.lam_prime == pytest.approx(4.0, abs=1e-8)

    def test_left_neighbour_is_strict_lower(self):
        cert = rooted_comparison(load("c3.txt"), load("c3_left.txt"), BoundDirection.LOWER)
        assert cert.valid
        assert cert.verdict == VERDICT_STRICT
        assert cert.lam_prime == pytest.approx(3.0, abs=1e-8)
        assert cert.mismatches

    def test_wrong_direction_is_invalid(self):
        """
        PROTECTS AGAINST: Claiming lambda <= 3 for a matrix whose Perron root is 4.
        """
        cert = rooted_comparison(load("c3.txt"), load("c3_left.txt"), BoundDirection.UPPER)
        assert not cert.valid
        assert cert.verdict == VERDICT_INVALID
        assert cert.failures[0].startswith("(i)")

    def test_non_eigenvector_rejected(self):
        c = load("c3.txt")
        v = left_eigenvector_nonneg(c).eigenvector
        cert = comparison_certificate(c, load("c3_right.txt"), np.eye(3), q_matrix(3), [0, 1, 0], v)
        assert not cert.valid
        assert any(f.startswith("(ii)") for f in cert.failures)

    def test_order_mismatch(self):
        with pytest.raises(DimensionError):
            rooted_comparison(load("c3.txt"), np.eye(2))
