import json
from importlib import resources

import pytest
from click.testing import CliRunner

from milpkit.cli import main
from milpkit.fixtures import chemical_scheduling
from milpkit.lpformat import parse_lp, write_lp
from milpkit.omt import load_tree, replay
from milpkit.reporting import classification_payload


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def chemical_lp(tmp_path):
    path = tmp_path / "chemical.lp"
    path.write_text(write_lp(chemical_scheduling()))
    return str(path)


def chemical_script_path(tmp_path):
    text = resources.files("milpkit.data").joinpath("chemical_session.json").read_text()
    path = tmp_path / "answers.json"
    path.write_text(text)
    return str(path)


# -- classify ----------------------------------------------------------------

def test_classify_chemical_table(runner, chemical_lp):
    result = runner.invoke(main, ["classify", chemical_lp])
    assert result.exit_code == 0
    assert "3+9" in result.output
    for node in ("11", "14", "7"):
        assert node in result.output.split("nodes:")[1]


def test_classify_json_matches_library_payload(runner, chemical_lp):
    result = runner.invoke(main, ["classify", chemical_lp, "--json"])
    assert result.exit_code == 0
    expected = classification_payload(parse_lp(write_lp(chemical_scheduling())))
    assert json.loads(result.output) == expected


def test_classify_empty_model(runner, tmp_path):
    path = tmp_path / "empty.lp"
    path.write_text("min: 0;\n")
    result = runner.invoke(main, ["classify", str(path)])
    assert result.exit_code == 0
    assert "nodes:" in result.output


def test_classify_garbage_exits_1(runner, tmp_path):
    path = tmp_path / "bad.lp"
    path.write_text("this is not lp\n")
    result = runner.invoke(main, ["classify", str(path)])
    assert result.exit_code == 1
    assert "line 1" in result.output


def test_classify_invalid_model_exits_2(runner, tmp_path):
    path = tmp_path / "bad_bounds.lp"
    path.write_text("min: 0; c: z <= 1; 0 <= z <= 5; bin z;\n")
    result = runner.invoke(main, ["classify", str(path)])
    assert result.exit_code == 2
    assert "binary-bounds" in result.output


def test_classify_missing_file_exits_4(runner):
    result = runner.invoke(main, ["classify", "/no/such/file.lp"])
    assert result.exit_code == 4


# -- elicit ------------------------------------------------------------------

def test_elicit_script_matches_replay(runner, tmp_path):
    script = chemical_script_path(tmp_path)
    result = runner.invoke(main, ["elicit", "--script", script, "--name", "chem"])
    assert result.exit_code == 0
    expected = write_lp(replay(load_tree(), json.loads(
        resources.files("milpkit.data").joinpath("chemical_session.json").read_text()
    )["transcript"], "chem"))
    assert result.output == expected


def test_elicit_script_to_file(runner, tmp_path):
    script = chemical_script_path(tmp_path)
    out = tmp_path / "model.lp"
    result = runner.invoke(main, ["elicit", "--script", script, "--out", str(out)])
    assert result.exit_code == 0
    parsed = parse_lp(out.read_text())
    assert parsed.constraints


def test_elicit_bad_step_exits_3(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([{"choice": 2}, {"choice": 99}]))
    result = runner.invoke(main, ["elicit", "--script", str(path)])
    assert result.exit_code == 3
    assert "step 1" in result.output


def test_elicit_unparseable_script_exits_1(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    result = runner.invoke(main, ["elicit", "--script", str(path)])
    assert result.exit_code == 1


def test_elicit_interactive_minimal(runner):
    lines = [
        json.dumps({"choice": 0}),
        json.dumps({"choice": 0}),
        json.dumps({"params": {"variables": [{"name": "x", "number_type": "binary"}]}}),
        json.dumps({"navigation": "FINISH_BRANCH"}),
        json.dumps({"navigation": "FINISH_BRANCH"}),
    ]
    result = runner.invoke(main, ["elicit"], input="\n".join(lines) + "\n")
    assert result.exit_code == 0
    assert "bin x;" in result.output


def test_elicit_interactive_reprompts_on_bad_answer(runner):
    lines = [
        json.dumps({"choice": 9}),
        "not json",
        json.dumps({"choice": 0}),
        json.dumps({"choice": 0}),
        json.dumps({"params": {"variables": [{"name": "x", "number_type": "binary"}]}}),
        json.dumps({"navigation": "FINISH_BRANCH"}),
        json.dumps({"navigation": "FINISH_BRANCH"}),
    ]
    result = runner.invoke(main, ["elicit"], input="\n".join(lines) + "\n")
    assert result.exit_code == 0
    assert "invalid answer" in result.output and "not JSON" in result.output


# -- verify-encodings --------------------------------------------------------

def test_verify_encodings_small(runner):
    result = runner.invoke(main, ["verify-encodings", "--max-n", "2"])
    assert result.exit_code == 0
    assert "PASS" in result.output and "FAIL" not in result.output
    assert "20/20 encodings verified" in result.output


def test_verify_encodings_injected_fault(runner):
    result = runner.invoke(main, ["verify-encodings", "--max-n", "1", "--inject-bad-m"])
    assert result.exit_code == 1
    assert "FAIL" in result.output and "counterexample" in result.output


# -- export-ontology ---------------------------------------------------------

def test_export_ontology_stdout(runner):
    result = runner.invoke(main, ["export-ontology", "--out", "-"])
    assert result.exit_code == 0
    assert '<Class IRI="#SetCovering" />' in result.output


def test_export_ontology_file(runner, tmp_path):
    out = tmp_path / "milp.owl"
    result = runner.invoke(main, ["export-ontology", "--out", str(out)])
    assert result.exit_code == 0
    assert "SetCovering" in out.read_text()


def test_export_ontology_io_error_exits_4(runner):
    result = runner.invoke(main, ["export-ontology", "--out", "/no/such/dir/milp.owl"])
    assert result.exit_code == 4
