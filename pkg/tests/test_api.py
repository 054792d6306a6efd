import pytest
from fastapi.testclient import TestClient

from forrelab import __version__
from forrelab.api.main import app


@pytest.fixture
def client() -> TestClient:
    return TestClient(app)


class TestApi:
    """HTTP routes under /api/v1"""

    def test_health(self, client):
        response = client.get("/api/v1/health")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "healthy"
        assert body["version"] == __version__

    def test_info(self, client):
        body = client.get("/api/v1/info").json()
        assert "resample" in body["games"]
        assert "desk-trapdoor" in body["profiles"]
        assert "fake-pk:<inverter>" in body["adversaries"]
        assert "trapdoor-holding" in body["inverters"]

    def test_run_experiment(self, client):
        spec = {"game": "prf-distinguish", "trials": 10, "adversary": {"name": "constant0"}}
        response = client.post("/api/v1/experiments", json=spec)
        assert response.status_code == 200
        report = response.json()
        assert report["spec"]["game"] == "prf-distinguish"
        assert any(e["name"] == "advantage" and e["value"] == 0.0 for e in report["estimates"])

    def test_external_adversaries_refused(self, client):
        spec = {"game": "prf-distinguish", "trials": 1, "adversary": {"kind": "external", "command": "true"}}
        assert client.post("/api/v1/experiments", json=spec).status_code == 422

    def test_precondition_errors(self, client):
        spec = {"game": "towf-invert", "trials": 1, "profile": "desk"}
        response = client.post("/api/v1/experiments", json=spec)
        assert response.status_code == 422
        assert "trapdoor" in response.json()["detail"]

    def test_invalid_spec(self, client):
        assert client.post("/api/v1/experiments", json={"game": "towf-invert", "profile": "nope"}).status_code == 422
