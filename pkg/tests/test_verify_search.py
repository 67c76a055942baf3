"""
Extremal Search Tests

PURPOSE:
    End-to-end checks of the desk-scale search: enumerate, score, group
    ties and compare the winners with A_0 and A'_0.

WHAT THIS FILE PROTECTS AGAINST:
    - A'_0 not recognized as the maximizer at t = 2c - 3
    - Permutation-equivalent matrices counted as distinct maximizers
    - The candidate budget being ignored
    - A desk-scale acceptance case (c in {2, 3, 4}) silently regressing
"""

import os
import sys

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.errors import BudgetExceededError
from src.extremal import search
from src.extremal.constructions import ExtremalParams, construct_a0, construct_a0_prime
from src.extremal.acceptance import acceptance_cases, check_case, expects_competitor
from src.extremal.search import canonical_form, verify_conjecture


# ============================================================================
# TEST CLASS 1: CANONICAL FORM
# ============================================================================

class TestCanonicalForm:

    def test_permutation_invariant(self):
        a0 = construct_a0(ExtremalParams.build(3, 4, 5))
        perm = np.array([4, 2, 0, 3, 1])
        shuffled = a0[np.ix_(perm, perm)]
        np.testing.assert_array_equal(canonical_form(shuffled), canonical_form(a0))

    def test_transpose_invariant(self):
        a0 = construct_a0(ExtremalParams.build(3, 3, 5))
        np.testing.assert_array_equal(canonical_form(a0.T), canonical_form(a0))

    def test_distinguishes_different_matrices(self):
        a0 = construct_a0(ExtremalParams.build(3, 3, 5))
        assert not np.array_equal(canonical_form(a0), canonical_form(construct_a0_prime(3, 5)))

    @pytest.mark.parametrize("c,t,n", [(2, 3, 4), (3, 3, 5), (3, 5, 6), (4, 5, 6)])
    def test_random_relabelings(self, c, t, n):
        """
        PROTECTS AGAINST: A canonical form that depends on the row order it was given.
        """
        rng = np.random.default_rng(11)
        a0 = construct_a0(ExtremalParams.build(c, t, n))
        expected = canonical_form(a0)
        for _ in range(25):
            perm = rng.permutation(n)
            relabeled = a0[np.ix_(perm, perm)]
            np.testing.assert_array_equal(canonical_form(relabeled), expected)
            np.testing.assert_array_equal(canonical_form(relabeled.T), expected)

    def test_one_canonical_form_per_member(self, monkeypatch):
        calls = []
        real = search.canonical_form

        def counting(a):
            calls.append(1)
            return real(a)

        monkeypatch.setattr(search, "canonical_form", counting)
        a0 = construct_a0(ExtremalParams.build(3, 4, 5))
        members = [a0, a0.T, a0[::-1, ::-1].copy(), construct_a0_prime(3, 5)]
        forms = search._distinct_forms(members)
        assert len(calls) == len(members)
        assert len(forms) == 2


# ============================================================================
# TEST CLASS 2: SEARCH
# ============================================================================

class TestVerifyConjecture:

    def test_a0_unique_maximizer(self):
        report = verify_conjecture(ExtremalParams.from_e(4, 6))
        assert report.candidates_examined == 7
        assert report.matches_a0
        assert report.co_maximizer_count == 1
        assert report.max_rho == pytest.approx(2.2469796, abs=1e-6)
        assert report.runner_up_rho == pytest.approx(2.0, abs=1e-9)

    def test_competitor_wins_at_2c_minus_3(self):
        """
        PROTECTS AGAINST: Reporting A_0 where A'_0 is strictly better (c = 3, t = 3).
        """
        report = verify_conjecture(ExtremalParams.from_e(5, 12))
        assert report.matches_a0_prime
        assert not report.matches_a0
        assert report.runner_up_matches_a0
        assert report.max_rho > report.runner_up_rho

    def test_a0_wins_below_competitor_range(self):
        report = verify_conjecture(ExtremalParams.from_e(5, 11))
        assert report.matches_a0
        assert report.co_maximizer_count == 1

    def test_zero_trace(self):
        report = verify_conjecture(ExtremalParams.from_e(4, 4, zero_trace=True))
        assert report.matches_a0
        assert not np.diag(report.maximizer).any()

    def test_t_zero_uses_small_t_forms(self):
        report = verify_conjecture(ExtremalParams.from_e(4, 4))
        assert report.matches_small_t is True
        assert report.max_rho == pytest.approx(2.0, abs=1e-9)

    def test_full_search_agrees(self):
        report = verify_conjecture(ExtremalParams.from_e(3, 6), full=True)
        assert report.full_search["agrees"]
        assert report.full_search["candidates"] == 84

    def test_proof_bound_summary(self):
        report = verify_conjecture(ExtremalParams.from_e(4, 6), check_bound=True)
        assert report.proof_bound["violations"] == 0
        assert report.proof_bound["checked"] + report.proof_bound["not_rooted"] == 7

    def test_threaded_scoring_matches(self):
        params = ExtremalParams.from_e(5, 11)
        single = verify_conjecture(params)
        threaded = verify_conjecture(params, workers=3)
        assert threaded.max_rho == single.max_rho
        assert threaded.candidates_examined == single.candidates_examined

    def test_budget_enforced(self):
        with pytest.raises(BudgetExceededError):
            verify_conjecture(ExtremalParams.from_e(5, 11), budget=3)

    def test_report_keys(self):
        data = verify_conjecture(ExtremalParams.from_e(4, 6)).to_dict()
        assert data["params"] == {"n": 4, "e": 6, "c": 2, "t": 2, "zero_trace": False}
        assert data["maximizer"] == canonical_form(construct_a0(ExtremalParams.from_e(4, 6))).tolist()


# ============================================================================
# TEST CLASS 3: ACCEPTANCE CASES
# ============================================================================

ACCEPTANCE_CASES = acceptance_cases(4)


class TestAcceptanceCases:

    def test_case_list(self):
        assert len(ACCEPTANCE_CASES) == 27
        competitors = [p for p in ACCEPTANCE_CASES if expects_competitor(p)]
        assert [(p.c, p.t, p.e) for p in competitors] == [(3, 3, 12), (4, 5, 21)]

    @pytest.mark.parametrize(
        "params", ACCEPTANCE_CASES,
        ids=[f"c{p.c}-t{p.t}-n{p.n}{'-zt' if p.zero_trace else ''}" for p in ACCEPTANCE_CASES],
    )
    def test_case_passes(self, params):
        result = check_case(params)
        assert result["passed"], result

    def test_c4_runner_up(self):
        """
        PROTECTS AGAINST: A_0 losing its second place behind A'_0 at c = 4, e = 21.
        """
        report = verify_conjecture(ExtremalParams.from_e(6, 21))
        assert report.params.c == 4 and report.params.t == 5
        assert report.matches_a0_prime
        assert report.runner_up_matches_a0
        assert report.max_rho > report.runner_up_rho
