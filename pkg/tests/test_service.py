import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from erislab.service import app

client = TestClient(app)

ROOT = Path(__file__).resolve().parent.parent
TWO_COINS = (ROOT / "corpus" / "two_coins.eris").read_text()
FIG1 = (ROOT / "corpus" / "fig1.eris").read_text()
POST_42 = json.loads((ROOT / "fixtures" / "post_is_42.json").read_text())
POST_TRUE_VAL = json.loads((ROOT / "fixtures" / "post_is_true.json").read_text())
SCHED_PARTIAL = json.loads(
    (ROOT / "fixtures" / "fig1_schedule_partial.json").read_text())


def test_health():
    assert client.get("/health").json() == {"status": "ok"}


def test_parse_endpoint():
    r = client.post("/parse", json={"source": TWO_COINS})
    body = r.json()
    assert r.status_code == 200 and body["verdict"] == "pass"
    assert body["result"]["roundtrip"]
    assert body["result"]["sites"] == [
        {"site": 0, "node": "(rand 1)"}, {"site": 1, "node": "(rand 1)"}]


def test_parse_endpoint_positioned_error():
    r = client.post("/parse", json={"source": "(rand"})
    assert r.status_code == 422
    assert "1:1" in r.json()["detail"]


def test_exec_endpoint_two_coins():
    r = client.post("/exec", json={"source": TWO_COINS, "depth": 6})
    body = r.json()["result"]
    assert body["values"] == [{"key": "42", "num": 1, "den": 4}]
    assert body["residual_mass"] == {"num": 3, "den": 4}
    assert body["stuck_mass"] == {"num": 0, "den": 1}


def test_exec_endpoint_depth_zero():
    r = client.post("/exec", json={"source": TWO_COINS, "depth": 0})
    assert r.json()["result"]["residual_mass"] == {"num": 1, "den": 1}


def test_bound_endpoint_fig1():
    for mode, field, expect in (("partial", "lower", {"num": 1, "den": 4}),
                                ("total", "upper", {"num": 3, "den": 8})):
        r = client.post("/bound", json={"source": FIG1, "post": POST_TRUE_VAL,
                                        "mode": mode, "depth": 16})
        assert r.json()["result"][field] == expect


def test_mc_endpoint_reports_rng():
    r = client.post("/mc", json={"source": "(rand 1)",
                                 "post": {"kind": "eq",
                                          "value": {"kind": "int", "value": 0}},
                                 "trials": 200, "seed": 3, "step_budget": 8})
    body = r.json()
    assert body["rng"]["algorithm"] == "splitmix64"
    assert 0.3 <= body["result"]["freq"] <= 0.7


def test_check_schedule_endpoint():
    r = client.post("/check-schedule", json={
        "source": FIG1, "schedule": SCHED_PARTIAL,
        "post": POST_TRUE_VAL, "mode": "partial"})
    assert r.json()["verdict"] == "pass"
    bad = dict(SCHED_PARTIAL)
    bad["initial"] = {"num": 249, "den": 1000}
    r2 = client.post("/check-schedule", json={
        "source": FIG1, "schedule": bad,
        "post": POST_TRUE_VAL, "mode": "partial"})
    body = r2.json()
    assert body["verdict"] == "fail"
    assert "insufficient" in body["result"]["reason"]


def test_check_amplification_endpoint():
    cert = json.loads((ROOT / "fixtures" / "rsamp_cert_3_1.json").read_text())
    r = client.post("/check-amplification", json={
        "source": "(rand 3)", "certificate": cert, "eps0": "1/8"})
    body = r.json()
    assert body["verdict"] == "pass"
    assert body["result"]["certified_depth"] == 3


def test_constants_endpoint():
    r = client.post("/constants", json={"kind": "planner", "args": [1, 2]})
    res = r.json()["result"]
    assert res["ec_amp"] == {"num": 4, "den": 3}
    assert res["ec_rem"] == [{"num": 1, "den": 1}, {"num": 2, "den": 3},
                             {"num": 0, "den": 1}]
    r = client.post("/constants", json={"kind": "tail", "args": [1, 0, 3]})
    assert r.json()["result"]["tail_bound"] == {"num": 1, "den": 8}
    r = client.post("/constants", json={"kind": "amort-hash", "args": [7, 4]})
    assert r.json()["result"]["eps_max"] == {"num": 3, "den": 16}
    r = client.post("/constants", json={"kind": "spline", "args": [1, 1]})
    assert r.json()["result"]["spline_bound"] == {"num": 1, "den": 3}
    r = client.post("/constants", json={"kind": "resize-hash", "args": [8, 2]})
    assert r.json()["result"]["amortized"] == {"num": 3, "den": 16}


def test_constants_endpoint_validation():
    r = client.post("/constants", json={"kind": "tail", "args": [2, 2, 1]})
    assert r.status_code == 422


def test_case_study_endpoint():
    r = client.post("/case-study", json={"name": "iter-demo", "params": {},
                                         "seed": 0})
    body = r.json()
    assert body["verdict"] == "pass"
    assert body["result"]["exact_error"] == {"num": 5, "den": 12}


def test_case_study_unknown():
    r = client.post("/case-study", json={"name": "nope", "params": {}, "seed": 0})
    assert r.status_code == 422


def test_request_validation_rejects_negative_depth():
    r = client.post("/exec", json={"source": "(rand 1)", "depth": -1})
    assert r.status_code == 422
    r = client.post("/bound", json={"source": "(rand 1)",
                                    "post": {"kind": "true"},
                                    "mode": "sideways", "depth": 3})
    assert r.status_code == 422


def test_frontier_limit_reported_as_422():
    wide = "(+ (rand 4) (+ (rand 4) (+ (rand 4) (rand 4))))"
    r = client.post("/exec", json={"source": wide, "depth": 10,
                                   "frontier_limit": 5})
    assert r.status_code == 422 and "frontier" in r.json()["detail"]


def test_evidence_endpoint():
    r = client.post("/evidence", json={
        "source": (ROOT / "corpus" / "rsamp_1_0.eris").read_text(),
        "post": {"kind": "true"}, "depths": [0, 5, 10]})
    uppers = r.json()["result"]["uppers"]
    assert uppers == [{"depth": 0, "upper": {"num": 1, "den": 1}},
                      {"depth": 5, "upper": {"num": 1, "den": 2}},
                      {"depth": 10, "upper": {"num": 1, "den": 4}}]
