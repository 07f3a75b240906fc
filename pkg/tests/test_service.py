import json
import time
from importlib import resources

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from milpkit.cli import main
from milpkit.fixtures import chemical_scheduling
from milpkit.lpformat import write_lp
from milpkit.omt import load_tree, tree_to_json
from milpkit.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def chemical_transcript():
    text = resources.files("milpkit.data").joinpath("chemical_session.json").read_text()
    return json.loads(text)["transcript"]


def run_transcript(client, transcript):
    sid = client.post("/v1/sessions").json()["id"]
    for step in transcript:
        r = client.post(f"/v1/sessions/{sid}/answers", json=step)
        assert r.status_code == 200, r.text
    return sid


def test_health(client):
    assert client.get("/v1/health").json() == {"status": "ok"}


def test_omt_serves_fixture_tree(client):
    assert client.get("/v1/omt").json() == json.loads(tree_to_json(load_tree()))


def test_create_session_returns_root_question(client):
    r = client.post("/v1/sessions")
    assert r.status_code == 201
    body = r.json()
    assert body["id"] and not body["finished"]
    assert body["question"]["question"] == "What are the decisions?"
    assert len(body["question"]["schema"]["choices"]) == 3


def test_unknown_session_404(client):
    r = client.get("/v1/sessions/nope")
    assert r.status_code == 404
    assert r.json()["code"] == "unknown-session"


def test_partitioning_flow_and_model_download(client):
    sid = client.post("/v1/sessions").json()["id"]
    steps = [
        {"choice": 0},
        {"choice": 0},
        {"params": {"variables": [{"name": "y", "indices": [1], "number_type": "binary"},
                                  {"name": "y", "indices": [2], "number_type": "binary"}]}},
        {"navigation": "FINISH_BRANCH"},
        {"choice": 2},
        {"choice": 2},
        {"choice": 3},  # exactly-one leaf
    ]
    for step in steps:
        r = client.post(f"/v1/sessions/{sid}/answers", json=step)
        assert r.status_code == 200
    r = client.post(f"/v1/sessions/{sid}/answers",
                    json={"params": {"vars": ["y_1", "y_2"]}})
    assert r.status_code == 200
    assert "1 y_1 + 1 y_2 = 1" in r.json()["constraints"][0]
    lp = client.get(f"/v1/sessions/{sid}/model.lp")
    assert lp.status_code == 200
    assert "setpartitioning_1: y_1 + y_2 = 1;" in lp.text


def test_invalid_answer_envelope(client):
    sid = client.post("/v1/sessions").json()["id"]
    r = client.post(f"/v1/sessions/{sid}/answers", json={"choice": 42})
    assert r.status_code == 400
    body = r.json()
    assert body["code"] == "invalid-answer" and body["step"] == 0


def test_back_endpoint_undoes_last_answer(client):
    sid = client.post("/v1/sessions").json()["id"]
    client.post(f"/v1/sessions/{sid}/answers", json={"choice": 2})
    r = client.post(f"/v1/sessions/{sid}/back")
    assert r.status_code == 200
    assert r.json()["question"]["node"] == 0
    r = client.post(f"/v1/sessions/{sid}/back")
    assert r.status_code == 400


def test_model_download_requires_variables(client):
    sid = client.post("/v1/sessions").json()["id"]
    r = client.get(f"/v1/sessions/{sid}/model.lp")
    assert r.status_code == 409
    assert r.json()["code"] == "session-error"


def test_answer_after_completion_conflicts(client):
    sid = run_transcript(client, [{"navigation": "FINISH_BRANCH"}] )
    r = client.post(f"/v1/sessions/{sid}/answers", json={"choice": 0})
    assert r.status_code == 409
    assert r.json()["code"] == "session-complete"


def test_classify_endpoint_packing(client):
    r = client.post("/v1/classify", content="min: 0; c: x1 + x2 <= 1; bin x1, x2;")
    assert r.status_code == 200
    assert r.json()["node_summary"] == [11]


def test_classify_endpoint_errors(client):
    assert client.post("/v1/classify", content="").status_code == 400
    r = client.post("/v1/classify", content="garbage")
    assert r.status_code == 400 and r.json()["code"] == "parse-error"
    r = client.post("/v1/classify", content="min: 0; c: z <= 1; 0 <= z <= 5; bin z;")
    assert r.status_code == 400 and r.json()["code"] == "validation-error"


def test_cli_and_http_classification_identical(client, tmp_path):
    text = write_lp(chemical_scheduling())
    path = tmp_path / "chem.lp"
    path.write_text(text)
    cli = CliRunner().invoke(main, ["classify", str(path), "--json"])
    assert cli.exit_code == 0
    http = client.post("/v1/classify", content=text)
    assert json.loads(cli.output) == http.json()


def test_ontology_endpoint(client):
    r = client.get("/v1/ontology.owl")
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("application/xml")
    assert '<Class IRI="#SetCovering" />' in r.text


def test_full_chemical_session_matches_cli_replay(tmp_path):
    transcript = chemical_transcript()
    client = TestClient(create_app())
    sid = run_transcript(client, transcript)
    lp_http = client.get(f"/v1/sessions/{sid}/model.lp").text

    # a fresh service instance replaying the exported transcript agrees
    client2 = TestClient(create_app())
    sid2 = run_transcript(client2, client.get(f"/v1/sessions/{sid}").json()["transcript"])
    assert client2.get(f"/v1/sessions/{sid2}/model.lp").text == lp_http


def test_session_expiry():
    client = TestClient(create_app(ttl_seconds=0.0))
    sid = client.post("/v1/sessions").json()["id"]
    time.sleep(0.01)
    assert client.get(f"/v1/sessions/{sid}").status_code == 404
