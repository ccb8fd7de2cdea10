import pytest
from fastapi.testclient import TestClient

from main import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health/")
    assert response.status_code == 200
    assert response.json()["status"] == "success"


def test_list_scans(client):
    response = client.get("/scans/")
    assert response.status_code == 200
    assert set(response.json()["commands"]) == {"dispersion", "fig2", "fig3", "chi2", "flux", "langevin", "osc0d"}


def test_fig2_scan(client):
    response = client.post("/scans/fig2", json={"start": 20, "stop": 30, "count": 2})
    assert response.status_code == 200
    data = response.json()
    assert data["columns"] == ["theta_1i_deg", "ReG", "omega_s_THz", "valid_flag"]
    assert data["rows"][0]["omega_s_THz"] == pytest.approx(1.0, abs=0.1)
    assert data["provenance"]["command"] == "fig2"


def test_unknown_scan(client):
    assert client.post("/scans/plot", json={}).status_code == 404


def test_config_error_is_400(client):
    response = client.post("/scans/chi2", json={"method": "resonant"})
    assert response.status_code == 400


def test_chi2_scan_defaults_to_closed_form(client):
    response = client.post("/scans/chi2", json={"count": 2})
    assert response.status_code == 200
    assert response.json()["columns"] == ["q1", "q2", "sigma_re", "sigma_im", "chi_re", "chi_im"]


def test_numerical_error_is_422(client):
    response = client.post("/scans/fig3", json={"theta_1i_deg": 45})
    assert response.status_code == 422
    assert "phase" in response.json()["detail"].lower()


def test_invalid_body_rejected(client):
    assert client.post("/scans/fig2", json={"g": 3}).status_code == 422
    assert client.post("/scans/fig2", json={"gamma_q": 1}).status_code == 422
