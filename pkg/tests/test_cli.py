"""
Command Line Tests

PURPOSE:
    The CLI is the contract most users see: one JSON report on stdout,
    diagnostics on stderr, and exit codes that separate bad input (1),
    bounds that are not established (2) and internal failures (3).

WHAT THIS FILE PROTECTS AGAINST:
    - argparse usage errors leaking out as exit code 2
    - Violated hypotheses reported as success
    - Non-deterministic report text for identical inputs
    - --output writing a file when the command failed
    - Internal cross-check failures reported as bad input
"""

import io
import json
import os
import sys

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli.handlers import (
    EXIT_INPUT, EXIT_INTERNAL, EXIT_NOT_ESTABLISHED, EXIT_OK, FAILURE_KEYS, HANDLERS, execute,
)
from src.cli.main import run
from src.cli.reports import INFINITY, REPORT_KEYS
from src.config.settings import reset_settings_manager
from src.core.errors import ConsistencyError, InputError
from src.core.textio import read_matrix, write_matrix

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


def fixture(name: str) -> str:
    return os.path.join(FIXTURES, name)


def invoke(*argv):
    """Run the CLI in-process; returns (exit code, parsed stdout or None, stderr text)."""
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip() else None), err.getvalue()


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in ("ROOTBOUND_TOL", "ROOTBOUND_LOG_LEVEL", "ROOTBOUND_BUDGET"):
        monkeypatch.delenv(name, raising=False)
    reset_settings_manager()
    yield
    reset_settings_manager()


# ============================================================================
# TEST CLASS 1: SUCCESSFUL COMMANDS
# ============================================================================

class TestSuccess:

    def test_spectral_radius_report(self):
        code, report, _ = invoke("spectral", "radius", "--matrix", fixture("j3.txt"))
        assert code == EXIT_OK
        assert tuple(sorted(report)) == tuple(sorted(REPORT_KEYS))
        assert report["command"] == "spectral radius"
        assert report["result"]["value"] == pytest.approx(3.0)
        assert report["result"]["method"] == "power"
        assert len(report["inputs_digest"]) == 64

    def test_worked_example_upper_bound(self):
        code, report, _ = invoke(
            "bound", "upper", "--matrix", fixture("c5.txt"), "--partition", fixture("pi5.json"),
        )
        assert code == EXIT_OK
        result = report["result"]
        assert result["established"] is True
        assert result["bound"] == pytest.approx(18.6936, abs=1e-3)
        assert result["m_used"] == [[7, 6, 11], [12, 2, 6], [4, 4, 5]]
        assert result["equality"] == "strict"

    def test_no_real_eigenvalue_prints_infinity(self):
        code, report, _ = invoke("spectral", "rho-r", "--matrix", fixture("rotation.txt"))
        assert code == EXIT_OK
        assert report["result"]["value"] == INFINITY

    def test_rooted_check(self):
        code, report, _ = invoke("rooted-check", "--matrix", fixture("m5.txt"))
        assert code == EXIT_OK
        assert report["result"]["rooted"] is True
        assert report["result"]["d"] == 2.0

    def test_transpose_quotient(self, tmp_path):
        path = str(tmp_path / "m3.txt")
        write_matrix(path, np.array([[0, 1, 1], [1, 0, 1], [1, 1, -2]], dtype=float))
        part = tmp_path / "p.json"
        part.write_text(json.dumps({"n": 3, "blocks": [[1, 2], [3]]}))
        code, report, _ = invoke("quotient", "--matrix", path, "--partition", str(part), "--transpose")
        assert code == EXIT_OK
        assert report["result"]["quotient"] == [[1, 1], [2, -2]]
        assert report["result"]["rho_r"] == pytest.approx((-1 + 17 ** 0.5) / 2)

    def test_comparison_equality(self):
        code, report, _ = invoke(
            "bound", "compare", "--matrix", fixture("c3.txt"), "--cprime", fixture("c3_right.txt"),
        )
        assert code == EXIT_OK
        assert report["result"]["verdict"] == "equality"

    def test_sweep_uses_seed_flag(self):
        code, report, _ = invoke("bound", "sweep", "--suite", "row-sum-sandwich", "--trials", "5", "--seed", "7")
        assert code == EXIT_OK
        assert report["result"]["seed"] == 7
        assert report["result"]["ok"] is True

    def test_global_flag_after_subcommand(self):
        code, report, _ = invoke("spectral", "radius", "--matrix", fixture("c3.txt"), "--tol", "1e-6")
        assert code == EXIT_OK
        assert report["result"]["value"] == pytest.approx(4.0, abs=1e-5)

    def test_output_is_deterministic(self):
        """
        PROTECTS AGAINST: Key order or float formatting changing between runs.
        """
        argv = ("bound", "duan-zhou", "--matrix", fixture("c5.txt"), "--refined")
        first = io.StringIO()
        second = io.StringIO()
        run(list(argv), stdout=first, stderr=io.StringIO())
        run(list(argv), stdout=second, stderr=io.StringIO())
        assert first.getvalue() == second.getvalue()

    def test_construct_writes_output(self, tmp_path):
        target = str(tmp_path / "a0.txt")
        code, report, _ = invoke("construct", "a0", "--c", "2", "--t", "2", "--n", "4", "--output", target)
        assert code == EXIT_OK
        np.testing.assert_array_equal(read_matrix(target), report["result"]["matrix"])

    def test_verify_conjecture(self):
        code, report, _ = invoke("verify", "conjecture-c", "--n", "4", "--e", "6")
        assert code == EXIT_OK
        assert report["result"]["matches_a0"] is True
        assert report["result"]["candidates_examined"] == 7


# ============================================================================
# TEST CLASS 2: NOT ESTABLISHED (EXIT 2)
# ============================================================================

class TestNotEstablished:

    def test_violated_hypotheses(self, tmp_path):
        m = str(tmp_path / "m.txt")
        write_matrix(m, np.array([[6, 6, 11], [12, 2, 6], [4, 4, 5]], dtype=float))
        code, report, _ = invoke(
            "bound", "upper", "--matrix", fixture("c5.txt"), "--partition", fixture("pi5.json"), "--m", m,
        )
        assert code == EXIT_NOT_ESTABLISHED
        assert set(FAILURE_KEYS) <= set(report["result"])
        assert report["result"]["established"] is False
        assert report["result"]["check"]["violations"]

    def test_not_rooted_m(self, tmp_path):
        m = str(tmp_path / "m.txt")
        write_matrix(m, np.array([[0, 1], [2, 0]], dtype=float))
        part = tmp_path / "p.json"
        part.write_text(json.dumps({"n": 2, "blocks": [[1], [2]]}))
        code, report, _ = invoke("bound", "upper", "--matrix", m, "--partition", str(part), "--m", m)
        assert code == EXIT_NOT_ESTABLISHED
        assert report["result"]["check"]["rooted"] is False
        assert report["result"]["check"]["violations"][0]["condition"] == "row-sum-rooted"

    def test_invalid_certificate(self):
        code, report, _ = invoke(
            "bound", "compare", "--matrix", fixture("c3.txt"), "--cprime", fixture("c3_left.txt"),
            "--direction", "upper",
        )
        assert code == EXIT_NOT_ESTABLISHED
        assert report["result"]["check"]["verdict"] == "certificate-invalid"


# ============================================================================
# TEST CLASS 3: INPUT ERRORS (EXIT 1)
# ============================================================================

class TestInputErrors:

    def test_missing_file(self):
        code, report, err = invoke("spectral", "radius", "--matrix", "/nonexistent/c.txt")
        assert code == EXIT_INPUT
        assert report is None
        assert err.startswith("error:")

    def test_usage_error_is_exit_one(self):
        code, _, err = invoke("spectral")
        assert code == EXIT_INPUT
        assert "error" in err

    def test_unknown_option(self):
        code, _, _ = invoke("bound", "stanley", "--e", "3", "--bogus")
        assert code == EXIT_INPUT

    def test_malformed_matrix(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("2 2\n1 2\n3\n")
        code, _, err = invoke("spectral", "radius", "--matrix", str(bad))
        assert code == EXIT_INPUT
        assert "row" in err

    def test_negative_entry(self):
        code, _, _ = invoke("spectral", "radius", "--matrix", fixture("rotation.txt"))
        assert code == EXIT_INPUT

    def test_budget_exceeded(self):
        code, _, err = invoke("verify", "conjecture-c", "--n", "5", "--e", "11", "--budget", "2")
        assert code == EXIT_INPUT
        assert "budget" in err

    def test_failed_command_writes_no_output(self, tmp_path):
        target = tmp_path / "a0.txt"
        code, _, _ = invoke("construct", "a0", "--c", "3", "--t", "1", "--output", str(target))
        assert code == EXIT_INPUT
        assert not target.exists()

    @pytest.mark.parametrize("value", ["--5", "3.5", "seven"])
    def test_malformed_integer_is_input_error(self, value):
        with pytest.raises(InputError, match="'e' must be an integer"):
            execute("bound stanley", {"e": value})

    def test_integer_string_accepted(self):
        report, code = execute("bound stanley", {"e": " 6 "})
        assert code == EXIT_OK
        assert report.result["bound"] == pytest.approx(3.0)


# ============================================================================
# TEST CLASS 4: INTERNAL FAILURES (EXIT 3)
# ============================================================================

class TestInternalErrors:

    def test_consistency_error_has_its_own_exit_code(self, monkeypatch):
        """
        PROTECTS AGAINST: A failed internal cross-check looking like a typo in the input.
        """
        def broken(inputs, settings):
            raise ConsistencyError("closed form and eigensolver disagree")

        monkeypatch.setitem(HANDLERS, "bound stanley", broken)
        code, report, err = invoke("bound", "stanley", "--e", "977")
        assert code == EXIT_INTERNAL
        assert code not in (EXIT_INPUT, EXIT_NOT_ESTABLISHED)
        assert report is None
        assert "internal check failed" in err
