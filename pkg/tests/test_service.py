import pytest
from fastapi.testclient import TestClient

from reopen.service import create_app


@pytest.fixture(scope="module")
def client(bundled):
    return TestClient(create_app(bundled))


class TestScenariosEndpoint:
    def test_lists_all_named_scenarios(self, client):
        r = client.get("/scenarios")
        assert r.status_code == 200
        ids = [s["id"] for s in r.json()]
        assert "AllExceptConsumerFacingSchools" in ids
        assert len(ids) == 6

    def test_definitions_carry_open_sets(self, client):
        defs = {s["id"]: s for s in client.get("/scenarios").json()}
        manuf = defs["ManufConstruction"]["open_industries"]
        assert "F" in manuf and "C20" in manuf and "K64" not in manuf
        aecf = defs["AllExceptConsumerFacing"]["open_industries"]
        assert "K64" in aecf and "G47" not in aecf


class TestSimulateEndpoint:
    def test_series_length(self, client):
        r = client.post("/simulate", json={"scenario": "lockdown",
                                           "horizon": 120})
        assert r.status_code == 200
        body = r.json()
        assert len(body["series"]["days"]) == 121
        assert body["r0"] == pytest.approx(0.62)
        assert body["va_change_pp"] == pytest.approx(0.0)

    def test_deterministic_responses(self, client):
        req = {"scenario": "open", "horizon": 100}
        a = client.post("/simulate", json=req).json()
        b = client.post("/simulate", json=req).json()
        assert a == b

    def test_delta_out_of_range_is_422(self, client):
        r = client.post("/simulate", json={
            "custom": {"open_industries": [], "delta_w": {"K64": 2.0}}})
        assert r.status_code == 422

    def test_unknown_code_is_422(self, client):
        r = client.post("/simulate", json={
            "custom": {"open_industries": ["XX99"]}})
        assert r.status_code == 422

    def test_unknown_scenario_is_422(self, client):
        r = client.post("/simulate", json={"scenario": "bogus"})
        assert r.status_code == 422

    def test_malformed_body_is_4xx(self, client):
        r = client.post("/simulate", content=b"{not json",
                        headers={"content-type": "application/json"})
        assert r.status_code in (400, 422)

    def test_custom_policy_runs(self, client):
        r = client.post("/simulate", json={
            "custom": {"open_industries": ["C20", "C21", "F"],
                       "schools_open": False},
            "horizon": 100})
        assert r.status_code == 200
        body = r.json()
        assert body["scenario"] == "Custom"
        assert body["va_change_pp"] > 0.0

    def test_short_horizon_still_reports_boost(self, client):
        r = client.post("/simulate", json={"scenario": "open", "horizon": 30})
        assert r.status_code == 200
        body = r.json()
        assert len(body["series"]["days"]) == 31
        assert body["va_change_pp"] > 0.0

    def test_params_override(self, client):
        r = client.post("/simulate", json={"scenario": "lockdown",
                                           "params": {"prod_fn": "linear"},
                                           "horizon": 80})
        assert r.status_code == 200

    def test_bad_params_rejected(self, client):
        r = client.post("/simulate", json={"scenario": "lockdown",
                                           "params": {"prod_fn": "cobb"}})
        assert r.status_code == 422


class TestSensitivityEndpoint:
    def test_bands(self, client):
        r = client.post("/sensitivity", json={"sigma": 0.1, "n_runs": 5,
                                              "horizon": 40})
        assert r.status_code == 200
        body = r.json()
        assert len(body["median"]) == 41
        assert all(a <= b + 1e-12 for a, b in zip(body["q25"], body["q75"]))

    def test_bad_mode_is_422(self, client):
        r = client.post("/sensitivity", json={"sigma": 0.1, "n_runs": 2,
                                              "mode": "bogus"})
        assert r.status_code == 422


class TestCalibrationEndpoint:
    def test_summary(self, client):
        r = client.get("/calibration")
        assert r.status_code == 200
        body = r.json()
        assert body["n_industries"] == 55
        assert body["workforce_shares"]["onsite"] == pytest.approx(0.37,
                                                                   abs=0.015)
        assert "io_table.csv" in body["digests"]
