"""
HTTP API Tests

PURPOSE:
    The Flask API runs the same command handlers as the CLI. These tests
    pin the status-code mapping and the health probes.

WHAT THIS FILE PROTECTS AGAINST:
    - Hypothesis failures returned as 200
    - Malformed bodies producing 500 instead of 400
    - Internal cross-check failures answered with anything but 500
    - Health probes counting against the rate limit
"""

import os
import sys

import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app import app
from src.cli.handlers import HANDLERS
from src.cli.reports import REPORT_KEYS
from src.core.errors import ConsistencyError
from src.core.textio import read_matrix, read_partition

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


@pytest.fixture
def client():
    app.config["TESTING"] = True
    with app.test_client() as c:
        yield c


@pytest.fixture
def worked_example():
    return {
        "matrix": read_matrix(os.path.join(FIXTURES, "c5.txt")).tolist(),
        "partition": read_partition(os.path.join(FIXTURES, "pi5.json")).to_dict(),
    }


# ============================================================================
# TEST CLASS 1: COMPUTE ENDPOINTS
# ============================================================================

class TestCompute:

    def test_spectral_radius(self, client):
        resp = client.post("/api/spectral/radius", json={"matrix": [[1, 1], [1, 1]]})
        assert resp.status_code == 200
        data = resp.get_json()
        assert set(data) == set(REPORT_KEYS)
        assert data["result"]["value"] == pytest.approx(2.0)

    def test_upper_bound(self, client, worked_example):
        resp = client.post("/api/bound/upper", json=worked_example)
        assert resp.status_code == 200
        assert resp.get_json()["result"]["bound"] == pytest.approx(18.6936, abs=1e-3)

    def test_hypothesis_failure_is_422(self, client, worked_example):
        """
        PROTECTS AGAINST: Clients reading a rejected bound as a result.
        """
        body = dict(worked_example, m=[[6, 6, 11], [12, 2, 6], [4, 4, 5]])
        resp = client.post("/api/bound/upper", json=body)
        assert resp.status_code == 422
        assert resp.get_json()["result"]["established"] is False

    def test_rho_r_infinity(self, client):
        resp = client.post("/api/spectral/rho-r", json={"matrix": [[0, 1], [-1, 0]]})
        assert resp.status_code == 200
        assert resp.get_json()["result"]["value"] == "infinity"

    def test_verify_variant(self, client):
        resp = client.post("/api/verify", json={"variant": "zero-trace", "n": 4, "e": 4})
        assert resp.status_code == 200
        data = resp.get_json()
        assert data["command"] == "verify zero-trace"
        assert data["result"]["matches_a0"] is True


# ============================================================================
# TEST CLASS 2: BAD REQUESTS
# ============================================================================

class TestBadRequests:

    def test_non_json_body(self, client):
        resp = client.post("/api/spectral/radius", data="not json", content_type="text/plain")
        assert resp.status_code == 400
        assert resp.get_json()["success"] is False

    def test_missing_matrix(self, client):
        resp = client.post("/api/spectral/radius", json={})
        assert resp.status_code == 400
        assert "matrix" in resp.get_json()["error"]

    def test_negative_entry(self, client):
        resp = client.post("/api/spectral/radius", json={"matrix": [[1, -1], [0, 1]]})
        assert resp.status_code == 400

    def test_unknown_verify_variant(self, client):
        resp = client.post("/api/verify", json={"variant": "everything", "n": 4, "e": 6})
        assert resp.status_code == 400

    def test_malformed_integer(self, client):
        resp = client.post("/api/construct/a0", json={"c": "--5", "t": 2})
        assert resp.status_code == 400
        assert "'c' must be an integer" in resp.get_json()["error"]

    def test_internal_failure_is_500(self, client, monkeypatch):
        def broken(inputs, settings):
            raise ConsistencyError("closed form and eigensolver disagree")

        monkeypatch.setitem(HANDLERS, "construct a0", broken)
        resp = client.post("/api/construct/a0", json={"c": 7, "t": 3, "n": 41})
        assert resp.status_code == 500
        assert resp.get_json()["success"] is False


# ============================================================================
# TEST CLASS 3: INFO AND HEALTH
# ============================================================================

class TestHealth:

    def test_info_lists_commands(self, client):
        data = client.get("/").get_json()
        assert "bound upper" in data["commands"]
        assert "verify conjecture-c" in data["commands"]

    @pytest.mark.parametrize("path", ["/health", "/health/live"])
    def test_liveness(self, client, path):
        resp = client.get(path)
        assert resp.status_code == 200
        assert resp.get_json()["status"] == "alive"

    def test_readiness(self, client):
        resp = client.get("/health/ready")
        assert resp.status_code == 200
        assert resp.get_json()["status"] == "ready"
