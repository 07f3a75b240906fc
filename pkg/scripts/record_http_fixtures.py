"""Record real service responses for the frontend test fixtures.

Usage: python3 scripts/record_http_fixtures.py
Walks the bundled chemical-scheduling answer script against the HTTP
service and stores every payload, plus the CLI-replay LP bytes, in
frontend/test/fixtures/chemical_flow.json.  The frontend test suite
replays these against a mocked transport, so UI tests never invent
payloads the server would not produce.
"""

import json
import pathlib
from importlib import resources

from fastapi.testclient import TestClient

from milpkit.lpformat import write_lp
from milpkit.omt import load_tree, replay
from milpkit.service import create_app

OUT = pathlib.Path(__file__).resolve().parents[1] / "frontend" / "test" / "fixtures"

script = json.loads(
    resources.files("milpkit.data").joinpath("chemical_session.json").read_text()
)["transcript"]

client = TestClient(create_app())
tree = client.get("/v1/omt").json()
created = client.post("/v1/sessions").json()
sid = created["id"]

steps = []
for a in script:
    r = client.post(f"/v1/sessions/{sid}/answers", json=a)
    assert r.status_code == 200, r.text
    steps.append({"answer": a, "response": r.json()})

model_lp = client.get(f"/v1/sessions/{sid}/model.lp").text
cli_lp = write_lp(replay(load_tree(), script, "elicited"))
assert model_lp == cli_lp, "service and CLI replay disagree"

OUT.mkdir(parents=True, exist_ok=True)
(OUT / "chemical_flow.json").write_text(json.dumps({
    "tree": tree,
    "created": created,
    "steps": steps,
    "model_lp": model_lp,
    "cli_lp": cli_lp,
}, indent=2) + "\n")
print(f"wrote {OUT / 'chemical_flow.json'} ({len(steps)} steps)")
