import json

import pytest
from fastapi.testclient import TestClient

from eqdose import __version__
from eqdose.cli import main
from eqdose.service import create_app


@pytest.fixture(scope="module")
def client(library):
    return TestClient(create_app(library), raise_server_exceptions=False)


def test_envelope_carries_version_and_checksum(client, library):
    body = client.get("/tissues").json()
    assert body["engine_version"] == __version__
    assert body["library_checksum"] == library.checksum
    assert "result" in body and "error" not in body


def test_tissue_listing_matches_library(client, library):
    body = client.get("/tissues").json()
    assert [t["name"] for t in body["result"]["tissues"]] == library.names


def test_equivalent_cord_10x3(client):
    r = client.post("/equivalent", json={"tissue": "spinal cord", "courses": [{"n": 10, "d": 3}]})
    assert r.status_code == 200
    assert r.json()["result"]["eqd"] == pytest.approx(37.5, abs=1e-3)


def test_bed_endpoint(client):
    r = client.post("/bed", json={"tissue": "spinal cord", "courses": [{"n": 1, "d": 8}]})
    assert r.status_code == 200
    assert r.json()["result"]["bed"]["total_bed"] == pytest.approx(32.0, abs=1e-9)


def test_rule_violation_is_400_with_the_rule(client):
    r = client.post(
        "/bed", json={"tissue": "spinal cord", "courses": [{"n": 10, "d": 2, "ja": 21}]}
    )
    assert r.status_code == 400
    body = r.json()
    assert "result" not in body
    assert "20" in body["error"]["message"]


def test_schema_violation_is_400_with_field_path(client):
    r = client.post("/bed", json={"tissue": "spinal cord", "courses": [{"n": 0, "d": 3}]})
    assert r.status_code == 400
    assert r.json()["error"]["field_path"] == "courses.0.n"


def test_unknown_field_rejected(client):
    r = client.post(
        "/bed", json={"tissue": "spinal cord", "courses": [{"n": 1, "d": 3, "dose": 3}]}
    )
    assert r.status_code == 400


def test_unknown_tissue_is_400(client):
    r = client.post("/bed", json={"tissue": "femur", "courses": [{"n": 1, "d": 3}]})
    assert r.status_code == 400
    assert "unknown tissue" in r.json()["error"]["message"]


def test_solver_failure_is_422(client):
    r = client.post(
        "/equivalent",
        json={
            "tissue": "spinal cord",
            "courses": [{"n": 500, "d": 2}],
            "config": {"max_bracket": 100},
        },
    )
    assert r.status_code == 422
    assert r.json()["error"]["code"] == "solver_failure"


def test_ntcp_and_risk_endpoints(client, library):
    lung = library.get("lung")
    r = client.post("/ntcp", json={"tissue": "lung", "eud_2gy": lung.td50})
    assert r.status_code == 200
    assert r.json()["result"]["ntcp"] == pytest.approx(0.5, abs=1e-9)

    r = client.post("/risk", json={"tissue": "lung", "courses": [{"n": 10, "d": 3}]})
    assert r.status_code == 200
    body = r.json()["result"]
    assert body["k_incidence"] > 0
    assert "ntcp_validity_range" in [w["code"] for w in body["warnings"]]


def test_outcome_without_dose_source_is_400(client):
    r = client.post("/ntcp", json={"tissue": "lung"})
    assert r.status_code == 400


def test_dvh_summarize_endpoint(client):
    r = client.post(
        "/dvh/summarize",
        json={"content": "0,100\n20,80\n32,2\n", "n_fractions": 10, "name": "cord"},
    )
    assert r.status_code == 200
    body = r.json()["result"]
    assert body["summary"]["per_fraction_dmax"] == 3.2


def test_unexpected_failures_hide_internals(client, monkeypatch):
    from eqdose import reports

    def boom(*args, **kwargs):
        raise RuntimeError("stack trace with secrets")

    monkeypatch.setattr(reports, "bed_report", boom)
    r = client.post("/bed", json={"tissue": "spinal cord", "courses": [{"n": 1, "d": 3}]})
    assert r.status_code == 500
    assert r.json()["error"]["message"] == "internal error"
    assert "secrets" not in r.text


def test_statelessness(client):
    request = {"tissue": "spinal cord", "courses": [{"n": 10, "d": 3}]}
    first = client.post("/equivalent", json=request).json()
    client.post("/bed", json={"tissue": "brain", "courses": [{"n": 5, "d": 4}]})
    client.post("/equivalent", json={"tissue": "rectum", "courses": [{"n": 25, "d": 1.8}]})
    second = client.post("/equivalent", json=request).json()
    assert first == second


CLI_SERVICE_PAIRS = [
    (
        ["bed", "--tissue", "spinal cord", "--course", "10x3"],
        "/bed",
        {"tissue": "spinal cord", "courses": [{"n": 10, "d": 3}]},
    ),
    (
        ["equiv", "--tissue", "spinal cord", "--course", "1x8 gap30 1x8"],
        "/equivalent",
        {
            "tissue": "spinal cord",
            "courses": [{"n": 1, "d": 8, "gap_after": 30}, {"n": 1, "d": 8}],
        },
    ),
    (
        ["equiv", "--tissue", "oral mucosa", "--course", "22x1.8@2/day"],
        "/equivalent",
        {
            "tissue": "oral mucosa",
            "courses": [{"n": 22, "d": 1.8, "m_per_day": 2, "delta_t": 6.0}],
        },
    ),
    (
        ["ntcp", "--tissue", "lung", "--course", "20x2"],
        "/ntcp",
        {"tissue": "lung", "courses": [{"n": 20, "d": 2}]},
    ),
    (
        ["risk", "--tissue", "lung", "--course", "20x2"],
        "/risk",
        {"tissue": "lung", "courses": [{"n": 20, "d": 2}]},
    ),
]


def _numbers(obj, path=""):
    if isinstance(obj, bool):
        return
    if isinstance(obj, (int, float)):
        yield path, float(obj)
    elif isinstance(obj, dict):
        for k in sorted(obj):
            yield from _numbers(obj[k], f"{path}.{k}")
    elif isinstance(obj, list):
        for i, item in enumerate(obj):
            yield from _numbers(item, f"{path}[{i}]")


@pytest.mark.parametrize("cli_args,endpoint,body", CLI_SERVICE_PAIRS)
def test_cli_service_parity(client, capsys, cli_args, endpoint, body):
    code = main([*cli_args, "--json"])
    assert code == 0
    cli_payload = json.loads(capsys.readouterr().out)
    service_payload = client.post(endpoint, json=body).json()["result"]
    cli_nums = dict(_numbers(cli_payload))
    svc_nums = dict(_numbers(service_payload))
    assert cli_nums.keys() == svc_nums.keys()
    for key, value in cli_nums.items():
        assert abs(value - svc_nums[key]) <= 1e-9, key
