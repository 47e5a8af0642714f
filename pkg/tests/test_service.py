"""Service endpoints: schemas, determinism, and error mapping."""

import json

from fastapi.testclient import TestClient

from vanish.service import app

client = TestClient(app)

DIAG = {
    "field": "gf:2",
    "row_blocks": [1, 1],
    "col_blocks": [1, 1],
    "blocks": [[[["1"]], [["0"]]], [[["0"]], [["1"]]]],
}
IDENTITY2 = {
    "field": "gf:2",
    "row_blocks": [2],
    "col_blocks": [2],
    "blocks": [[[["1", "0"], ["0", "1"]]]],
}


def test_solve_endpoint_record_shape():
    resp = client.post("/solve", json={"instance": DIAG, "options": {"check_oracle": True}})
    assert resp.status_code == 200
    rec = resp.json()
    assert rec["command"] == "solve"
    assert rec["result"]["weighted_dim"] == 2
    assert rec["result"]["oracle_match"] is True
    assert rec["certificate"] == "weak-duality-tight"
    assert isinstance(rec["sweeps"], int)
    assert len(rec["instance_hash"]) == 64
    assert "trace" not in rec  # excluded unless requested


def test_solve_endpoint_trace_and_bound():
    resp = client.post("/solve", json={"instance": IDENTITY2,
                                       "options": {"include_trace": True, "paper_bound": True}})
    rec = resp.json()
    assert rec["trace"] and all(isinstance(g, int) for g in rec["trace"])
    assert rec["result"]["paper_sweep_bound"] == str(2 ** 9 * 2 ** 9 * 4 ** 24)
    assert "sqrt(2)" in rec["result"]["rate_constant"]


def test_solve_endpoint_byte_identical_reruns():
    payload = {"instance": DIAG, "options": {"include_trace": True}}
    a = client.post("/solve", json=payload).content
    b = client.post("/solve", json=payload).content
    assert a == b


def test_solve_endpoint_rejects_malformed():
    resp = client.post("/solve", json={"instance": {"field": "gf:banana"}})
    assert resp.status_code == 400
    assert "detail" in resp.json()
    resp2 = client.post("/solve", json={"instance": DIAG, "options": {"max_sweeps": 0}})
    assert resp2.status_code == 422


def test_qdm_endpoint():
    resp = client.post("/qdm", json={"instance": IDENTITY2, "options": {"verify": True}})
    assert resp.status_code == 200
    rec = resp.json()
    assert rec["result"]["diag_sizes"] == [[0, 0], [2, 2], [0, 0]]
    assert rec["result"]["verified"] is True
    assert rec["result"]["transformed"] == [["1", "0"], ["0", "1"]] or \
        len(rec["result"]["transformed"]) == 2
    assert len(rec["result"]["chain"]) == 2


def test_ncrank_endpoint():
    doc = {"field": "gf:2", "matrices": [[["1", "0"], ["0", "1"]]]}
    resp = client.post("/ncrank", json={"instance": doc, "options": {"check_oracle": True}})
    rec = resp.json()
    assert rec["result"]["nc_rank"] == 2
    assert rec["result"]["oracle_match"] is True
    assert rec["result"]["shrink_inequality_holds"] is True


def test_oracle_endpoint():
    resp = client.post("/oracle", json={"instance": DIAG})
    rec = resp.json()
    assert rec["result"]["optimum"] == 2
    assert rec["result"]["optima_count"] == len(rec["result"]["optima"])
    resp_limit = client.post("/oracle", json={"instance": DIAG, "options": {"max_tuples": 1}})
    assert resp_limit.status_code == 400


def test_oracle_endpoint_rejects_rationals():
    doc = {"field": "q", "row_blocks": [1], "col_blocks": [1], "blocks": [[[["1"]]]]}
    resp = client.post("/oracle", json={"instance": doc})
    assert resp.status_code == 400


def test_record_schema_fields():
    rec = client.post("/solve", json={"instance": DIAG}).json()
    assert set(rec) <= {"command", "instance_hash", "result", "certificate", "sweeps", "trace"}
    parsed = json.loads(json.dumps(rec))
    assert parsed == rec
