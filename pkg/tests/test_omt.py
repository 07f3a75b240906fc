import json
from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from milpkit.classify import classify_model
from milpkit.omt import (
    AnswerError,
    PINNED_NODE_MEANINGS,
    SessionComplete,
    SessionError,
    TreeError,
    answer,
    current_question,
    emit_model,
    load_tree,
    replay,
    session_from_json,
    session_to_json,
    start_session,
    tree_to_json,
)


@pytest.fixture(scope="module")
def tree():
    return load_tree()


def chemical_script():
    text = resources.files("milpkit.data").joinpath("chemical_session.json").read_text()
    return json.loads(text)["transcript"]


# -- tree fixture and invariants --------------------------------------------

def test_cited_node_meanings_pinned(tree):
    expected = {
        2: "variable upper bound",
        3: "conditional upper bound",
        7: "fixed upper bound",
        8: "variable lower bound",
        9: "conditional lower bound",
        11: "set packing",
        12: "period-link balance",
        13: "assign-value equality",
        14: "inventory balance",
        17: "set partitioning",
        19: "fix to zero",
        24: "aggregated if-then",
    }
    assert PINNED_NODE_MEANINGS == expected
    for node_id, meaning in expected.items():
        assert meaning in tree.node(node_id).label.lower()
        assert tree.node(node_id).reconstructed is False


def test_three_top_branches(tree):
    branches = {tree.node(c).branch for c in tree.node(tree.root).children}
    assert branches == {"DECISION_VARIABLES", "OBJECTIVE", "CONSTRAINTS"}


def test_alias_node_pairs_conditional_bounds(tree):
    assert tree.node(9).alias_of == 3
    assert tree.node(9).builder_ref["name"] == tree.node(3).builder_ref["name"] == "conditional_bound"


def test_tree_round_trip(tree):
    again = load_tree(tree_to_json(tree))
    assert again.nodes == tree.nodes and again.root == tree.root
    assert tree_to_json(again) == tree_to_json(tree)


def _mutate(tree, fn):
    doc = json.loads(tree_to_json(tree))
    fn(doc)
    return json.dumps(doc)


def test_load_rejects_dangling_child(tree):
    bad = _mutate(tree, lambda d: d["nodes"][0]["children"].append(999))
    with pytest.raises(TreeError, match="dangling|no node"):
        load_tree(bad)


def test_load_rejects_cycle(tree):
    def fn(doc):
        for n in doc["nodes"]:
            if n["id"] == 114:
                n["children"].append(102)
    with pytest.raises(TreeError, match="cycle"):
        load_tree(_mutate(tree, fn))


def test_load_rejects_unknown_builder(tree):
    def fn(doc):
        for n in doc["nodes"]:
            if n["id"] == 11:
                n["builder_ref"]["name"] = "no_such_builder"
    with pytest.raises(TreeError, match="unknown builder"):
        load_tree(_mutate(tree, fn))


def test_load_rejects_missing_tag_leaf(tree):
    def fn(doc):
        doc["nodes"] = [n for n in doc["nodes"] if n["id"] != 15]
        for n in doc["nodes"]:
            n["children"] = [c for c in n["children"] if c != 15]
    with pytest.raises(TreeError, match="no leaf"):
        load_tree(_mutate(tree, fn))


def test_load_rejects_relabelled_cited_node(tree):
    def fn(doc):
        for n in doc["nodes"]:
            if n["id"] == 17:
                n["label"] = "Something else"
    with pytest.raises(TreeError, match="meaning mismatch"):
        load_tree(_mutate(tree, fn))


def test_load_rejects_garbage():
    with pytest.raises(TreeError, match="does not parse"):
        load_tree("{nope")
    with pytest.raises(TreeError, match="schema violation"):
        load_tree('{"version": "1", "root": 0, "nodes": [{"id": 0}]}')


# -- session navigation ------------------------------------------------------

def test_fresh_session_asks_root_question(tree):
    s = start_session(tree)
    q = current_question(s)
    assert q["node"] == tree.root
    assert q["question"] == "What are the decisions?"
    assert [c["label"] for c in q["schema"]["choices"]] == [
        "Decision variables", "Objective function", "Constraints"]


def test_choice_descends_and_leaf_shows_params(tree):
    s = start_session(tree)
    answer(s, {"choice": 0})
    answer(s, {"choice": 0})
    q = current_question(s)
    assert q["schema"]["builder"] == "declare_variables"
    assert q["schema"]["params"][0]["name"] == "variables"


def test_bad_answers_rejected(tree):
    s = start_session(tree)
    with pytest.raises(AnswerError):
        answer(s, {"choice": 7})
    with pytest.raises(AnswerError):
        answer(s, {"params": {}})
    with pytest.raises(AnswerError):
        answer(s, {"navigation": "SIDEWAYS"})
    with pytest.raises(AnswerError):
        answer(s, {})
    answer(s, {"choice": 0})
    answer(s, {"choice": 0})
    with pytest.raises(AnswerError):
        answer(s, {"choice": 0})  # leaf takes params


def test_declare_variables_validation(tree):
    s = start_session(tree)
    answer(s, {"choice": 0})
    answer(s, {"choice": 0})
    with pytest.raises(AnswerError, match="reserved prefix"):
        answer(s, {"params": {"variables": [{"name": "__aux_t9", "number_type": "binary"}]}})
    answer(s, {"params": {"variables": [{"name": "x", "number_type": "binary"}]}})
    answer(s, {"choice": 0})
    with pytest.raises(AnswerError, match="already declared"):
        answer(s, {"params": {"variables": [{"name": "x", "number_type": "binary"}]}})


def test_leaf_answer_builds_block_and_returns_to_branch_root(tree):
    s = start_session(tree)
    answer(s, {"choice": 0})
    answer(s, {"choice": 0})
    answer(s, {"params": {"variables": [
        {"name": "a", "number_type": "binary"},
        {"name": "b", "number_type": "binary"}]}})
    answer(s, {"navigation": "FINISH_BRANCH"})
    answer(s, {"choice": 2})
    answer(s, {"choice": 2})
    answer(s, {"choice": 6})  # at-most-one leaf
    answer(s, {"params": {"vars": ["a", "b"]}})
    assert s.cursor == 102
    assert len(s.built) == 1 and s.built[0][0] == 11


def test_missing_and_unknown_params_rejected(tree):
    s = start_session(tree)
    answer(s, {"choice": 0})
    answer(s, {"choice": 0})
    answer(s, {"params": {"variables": [{"name": "a", "number_type": "binary"}]}})
    answer(s, {"navigation": "FINISH_BRANCH"})
    answer(s, {"choice": 2})
    answer(s, {"choice": 2})
    answer(s, {"choice": 6})
    with pytest.raises(AnswerError, match="missing parameter"):
        answer(s, {"params": {}})
    with pytest.raises(AnswerError, match="unexpected parameter"):
        answer(s, {"params": {"vars": ["a"], "bogus": 1}})
    with pytest.raises(AnswerError, match="unknown variable"):
        answer(s, {"params": {"vars": ["zzz"]}})


def test_finish_branch_twice_completes(tree):
    s = start_session(tree)
    answer(s, {"choice": 2})
    answer(s, {"navigation": "FINISH_BRANCH"})
    assert s.cursor == tree.root and not s.finished
    answer(s, {"navigation": "FINISH_BRANCH"})
    assert s.finished
    with pytest.raises(SessionComplete):
        current_question(s)
    with pytest.raises(SessionComplete):
        answer(s, {"choice": 0})


def test_restart_branch(tree):
    s = start_session(tree)
    answer(s, {"choice": 2})
    answer(s, {"choice": 3})
    answer(s, {"navigation": "RESTART_BRANCH"})
    assert s.cursor == 102


def _snapshot(s):
    return (s.cursor, json.dumps(s.transcript), tuple(v.key for v in s.variables),
            s.objective, tuple((nid, b.constraints, b.aux_variables) for nid, b in s.built),
            tuple((nid, json.dumps(p)) for nid, p in s.pending), s.finished)


def test_back_at_start_rejected(tree):
    with pytest.raises(AnswerError):
        answer(start_session(tree), {"navigation": "BACK"})


@given(st.integers(0, len(chemical_script()) - 1))
@settings(max_examples=40, deadline=None)
def test_back_is_exact_inverse_of_answer(i):
    # replay a prefix, snapshot, take one more step, undo it
    tree = load_tree()
    script = chemical_script()
    s = start_session(tree)
    for a in script[:i]:
        answer(s, a)
    before = _snapshot(s)
    answer(s, script[i])
    answer(s, {"navigation": "BACK"})
    assert _snapshot(s) == before


# -- emission and replay -----------------------------------------------------

def test_emit_requires_variables(tree):
    with pytest.raises(SessionError, match="no decision variables"):
        emit_model(start_session(tree))


def test_placeholder_blocks_emission(tree):
    s = start_session(tree)
    answer(s, {"choice": 0})
    answer(s, {"choice": 0})
    answer(s, {"params": {"variables": [{"name": "a", "number_type": "binary"},
                                        {"name": "b", "number_type": "binary"}]}})
    answer(s, {"navigation": "FINISH_BRANCH"})
    answer(s, {"choice": 2})
    answer(s, {"choice": 2})
    answer(s, {"choice": 6})
    answer(s, {"params": {"vars": "?"}})
    assert s.pending
    with pytest.raises(SessionError, match="unfilled placeholder"):
        emit_model(s)
    answer(s, {"navigation": "BACK"})
    answer(s, {"params": {"vars": ["a", "b"]}})
    assert emit_model(s).constraints


def test_replay_chemical_script_classifies_as_expected(tree):
    m = replay(tree, chemical_script(), "chemical")
    assert classify_model(m).node_summary() == {11, (3, 9), 14, 7}


def test_replay_deterministic(tree):
    script = chemical_script()
    assert replay(tree, script) == replay(tree, script)


def test_replay_rejects_bad_step(tree):
    with pytest.raises(AnswerError, match="step 1"):
        replay(tree, [{"choice": 2}, {"choice": 99}])


def test_session_json_round_trip(tree):
    s = start_session(tree)
    for a in chemical_script():
        answer(s, a)
    s2 = session_from_json(tree, session_to_json(s))
    assert s2.id == s.id and s2.transcript == s.transcript
    assert emit_model(s2) == emit_model(s)


def test_session_json_version_guard(tree):
    doc = {"id": "x", "tree_version": "999", "transcript": []}
    with pytest.raises(SessionError, match="different tree version"):
        session_from_json(tree, json.dumps(doc))
    with pytest.raises(SessionError, match="schema violation"):
        session_from_json(tree, '{"id": "x"}')
