"""The optimization modelling tree and the elicitation session engine.

The tree is data (a JSON fixture shipped with the package); leaves name a
builder plus a parameter schema, so the tree can evolve without code
changes.  Sessions are append-only transcripts: any state is reproducible
by replaying the transcript from the root, which is exactly how BACK is
implemented.
"""

from __future__ import annotations

import json
import secrets
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence

import jsonschema

from . import blocks
from .blocks import BalanceKind, BoundKind, BuilderContext, BuiltBlock, Strength
from .model import (
    LinearExpr,
    Model,
    NumberType,
    Objective,
    ProblemSense,
    Sense,
    Variable,
    rat,
    validate,
)
from .typology import ALL_TAG_NAMES, TAGS

BRANCHES = ("DECISION_VARIABLES", "OBJECTIVE", "CONSTRAINTS")

# Meanings the cited node ids must carry, asserted against labels on load.
PINNED_NODE_MEANINGS = {
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


class TreeError(ValueError):
    pass


class SessionError(ValueError):
    pass


class SessionComplete(SessionError):
    pass


class AnswerError(SessionError):
    pass


TREE_SCHEMA = {
    "type": "object",
    "required": ["version", "root", "nodes"],
    "properties": {
        "version": {"type": "string"},
        "root": {"type": "integer"},
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "label", "branch", "question", "children"],
                "properties": {
                    "id": {"type": "integer"},
                    "label": {"type": "string"},
                    "branch": {"enum": list(BRANCHES) + ["ROOT"]},
                    "question": {"type": "string"},
                    "children": {"type": "array", "items": {"type": "integer"}},
                    "builder_ref": {
                        "type": "object",
                        "required": ["name", "params"],
                        "properties": {
                            "name": {"type": "string"},
                            "params": {
                                "type": "array",
                                "items": {
                                    "type": "object",
                                    "required": ["name", "type"],
                                    "properties": {
                                        "name": {"type": "string"},
                                        "type": {"type": "string"},
                                        "optional": {"type": "boolean"},
                                    },
                                },
                            },
                            "fixed": {"type": "object"},
                        },
                    },
                    "alias_of": {"type": "integer"},
                    "reconstructed": {"type": "boolean"},
                    "note": {"type": "string"},
                },
            },
        },
    },
}

SESSION_SCHEMA = {
    "type": "object",
    "required": ["id", "tree_version", "transcript"],
    "properties": {
        "id": {"type": "string"},
        "tree_version": {"type": "string"},
        "transcript": {"type": "array", "items": {"type": "object"}},
    },
}


@dataclass(frozen=True)
class OmtNode:
    id: int
    label: str
    branch: str
    question: str
    children: tuple = ()
    builder_ref: Optional[dict] = None
    alias_of: Optional[int] = None
    reconstructed: bool = True
    note: str = ""

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class OmtTree:
    root: int
    nodes: dict
    version: str

    def node(self, node_id: int) -> OmtNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise TreeError(f"no node with id {node_id}") from None

    def branch_root(self, branch: str) -> OmtNode:
        for child_id in self.node(self.root).children:
            if self.node(child_id).branch == branch:
                return self.node(child_id)
        raise TreeError(f"no top-level branch {branch!r}")


def _validate_tree(tree: OmtTree) -> None:
    root = tree.node(tree.root)
    branches = [tree.node(c).branch for c in root.children]
    if sorted(branches) != sorted(BRANCHES):
        raise TreeError("root must have exactly the three top branches")

    seen: set = set()
    stack = [tree.root]
    while stack:
        nid = stack.pop()
        if nid in seen:
            raise TreeError(f"cycle or shared node at id {nid}")
        seen.add(nid)
        node = tree.node(nid)
        for c in node.children:
            if c not in tree.nodes:
                raise TreeError(f"dangling child {c} of node {nid}")
            stack.append(c)
        if node.is_leaf and node.id != tree.root:
            if node.builder_ref is None:
                raise TreeError(f"leaf {nid} has no builder_ref")
            if node.builder_ref["name"] not in BUILDERS:
                raise TreeError(f"leaf {nid} names unknown builder {node.builder_ref['name']!r}")

    for node_id, meaning in PINNED_NODE_MEANINGS.items():
        if node_id not in tree.nodes:
            raise TreeError(f"cited node {node_id} missing")
        if meaning not in tree.nodes[node_id].label.lower():
            raise TreeError(f"cited node meaning mismatch: node {node_id} "
                            f"should mean {meaning!r}")

    leaf_ids = {n.id for n in tree.nodes.values()
                if n.is_leaf and n.alias_of is None and n.id != tree.root}
    for name in ALL_TAG_NAMES:
        if TAGS[name].omt_node_id not in leaf_ids:
            raise TreeError(f"typology tag {name} has no leaf")


def load_tree(source: Optional[str] = None) -> OmtTree:
    """Parse and validate a tree document; default is the embedded fixture."""
    if source is None:
        source = resources.files("milpkit.data").joinpath("omt_tree.json").read_text()
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as e:
        raise TreeError(f"tree document does not parse: {e}") from None
    try:
        jsonschema.validate(doc, TREE_SCHEMA)
    except jsonschema.ValidationError as e:
        raise TreeError(f"tree schema violation at {list(e.absolute_path)}: {e.message}") from None
    nodes = {}
    for n in doc["nodes"]:
        if n["id"] in nodes:
            raise TreeError(f"duplicate node id {n['id']}")
        nodes[n["id"]] = OmtNode(
            id=n["id"], label=n["label"], branch=n["branch"], question=n["question"],
            children=tuple(n.get("children", ())), builder_ref=n.get("builder_ref"),
            alias_of=n.get("alias_of"), reconstructed=n.get("reconstructed", True),
            note=n.get("note", ""),
        )
    tree = OmtTree(doc["root"], nodes, doc["version"])
    _validate_tree(tree)
    return tree


def tree_to_json(tree: OmtTree) -> str:
    nodes = []
    for nid in sorted(tree.nodes):
        n = tree.nodes[nid]
        d = {"id": n.id, "label": n.label, "branch": n.branch,
             "question": n.question, "children": list(n.children)}
        if n.builder_ref is not None:
            d["builder_ref"] = n.builder_ref
        if n.alias_of is not None:
            d["alias_of"] = n.alias_of
        d["reconstructed"] = n.reconstructed
        if n.note:
            d["note"] = n.note
        nodes.append(d)
    doc = {"version": tree.version, "root": tree.root, "nodes": nodes}
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Parameter decoding

_NUMBER_TYPES = {
    "binary": NumberType.BINARY,
    "nonneg_integer": NumberType.NONNEG_INTEGER,
    "nonneg_real": NumberType.NONNEG_REAL,
}


def _decode_expr(value, vars_by_key) -> LinearExpr:
    if not isinstance(value, dict) or "terms" not in value:
        raise AnswerError("expression must be {terms: [[coef, var], ...], constant?}")
    pairs = []
    for coef, key in value["terms"]:
        if key not in vars_by_key:
            raise AnswerError(f"unknown variable {key!r}")
        pairs.append((rat(coef), vars_by_key[key]))
    return LinearExpr.of(pairs, rat(value.get("constant", 0)))


def _decode_vars(value, vars_by_key) -> list:
    if not isinstance(value, list) or not value:
        raise AnswerError("expected a non-empty list of variable names")
    out = []
    for key in value:
        if key not in vars_by_key:
            raise AnswerError(f"unknown variable {key!r}")
        out.append(vars_by_key[key])
    return out


def _decode_var(value, vars_by_key) -> Variable:
    if value not in vars_by_key:
        raise AnswerError(f"unknown variable {value!r}")
    return vars_by_key[value]


def _decode_param(ptype: str, value, vars_by_key):
    if ptype in ("binary_vars", "vars"):
        return _decode_vars(value, vars_by_key)
    if ptype in ("binary_var", "variable"):
        return _decode_var(value, vars_by_key)
    if ptype == "expr":
        return _decode_expr(value, vars_by_key)
    if ptype == "rational":
        return rat(value)
    if ptype == "rational_list":
        return [rat(v) for v in value]
    if ptype == "int":
        return int(value)
    if ptype == "sign_list":
        return [int(v) for v in value]
    if ptype.startswith("choice:"):
        options = ptype.split(":", 1)[1].split("|")
        if value not in options:
            raise AnswerError(f"choice must be one of {options}")
        return value
    if ptype == "variable_decls":
        return value
    raise AnswerError(f"unknown parameter type {ptype!r}")


_KINDS = {
    "supply_upper": BoundKind.SUPPLY_UPPER,
    "demand_lower": BoundKind.DEMAND_LOWER,
    "io_balance": BalanceKind.IO_BALANCE,
    "period_link": BalanceKind.PERIOD_LINK,
    "assign_value": BalanceKind.ASSIGN_VALUE,
    "inventory": BalanceKind.INVENTORY,
    "min": ProblemSense.MIN,
    "max": ProblemSense.MAX,
    "le": Sense.LE,
    "eq": Sense.EQ,
    "ge": Sense.GE,
    "aggregated": Strength.AGGREGATED,
    "disaggregated": Strength.DISAGGREGATED,
}


def _block_builder(fn, enum_params=()):
    def run(params: dict, ctx: BuilderContext) -> BuiltBlock:
        kwargs = dict(params)
        for p in enum_params:
            if p in kwargs and isinstance(kwargs[p], str):
                kwargs[p] = _KINDS[kwargs[p]]
        return fn(ctx=ctx, **kwargs)
    return run


# Builder registry: leaf builder_ref names -> adapter over the block library.
BUILDERS = {
    "declare_variables": None,  # handled by the session engine
    "set_objective": None,      # handled by the session engine
    "set_covering": _block_builder(blocks.set_covering),
    "set_partitioning": _block_builder(blocks.set_partitioning),
    "set_packing": _block_builder(blocks.set_packing),
    "knapsack": _block_builder(blocks.knapsack),
    "bound": _block_builder(blocks.bound, enum_params=("kind",)),
    "balance": _block_builder(blocks.balance, enum_params=("kind",)),
    "fix_to_zero": _block_builder(blocks.fix_to_zero),
    "either_or": _block_builder(blocks.either_or),
    "if_then_bigM": _block_builder(blocks.if_then_bigM),
    "conditional_bound": _block_builder(blocks.conditional_bound),
    "implies_binary": _block_builder(blocks.implies_binary),
    "if_all_then": _block_builder(blocks.if_all_then),
    "only_if_all": _block_builder(blocks.only_if_all, enum_params=("strength",)),
    "iff_all": _block_builder(blocks.iff_all),
    "fix_value_if": _block_builder(blocks.fix_value_if),
    "general_constraint": _block_builder(blocks.general_constraint, enum_params=("sense",)),
}

PLACEHOLDER = "?"


@dataclass
class ElicitationSession:
    """A human's in-progress tree traversal; state is a fold of the transcript."""

    tree: OmtTree
    id: str = field(default_factory=lambda: secrets.token_urlsafe(12))
    cursor: int = 0
    transcript: list = field(default_factory=list)
    variables: list = field(default_factory=list)
    objective: Optional[Objective] = None
    built: list = field(default_factory=list)      # (node_id, BuiltBlock)
    pending: list = field(default_factory=list)    # (node_id, params) placeholders
    finished: bool = False
    _ctx: BuilderContext = field(default_factory=BuilderContext)

    def __post_init__(self):
        if self.cursor == 0:
            self.cursor = self.tree.root

    def vars_by_key(self) -> dict:
        return {v.key: v for v in self.variables}


def start_session(tree: OmtTree) -> ElicitationSession:
    return ElicitationSession(tree)


def current_question(session: ElicitationSession) -> dict:
    """Question text plus an answer schema (child labels or leaf params)."""
    if session.finished:
        raise SessionComplete("SESSION_COMPLETE")
    node = session.tree.node(session.cursor)
    schema: dict = {"navigation": ["BACK", "RESTART_BRANCH", "FINISH_BRANCH"]}
    if node.is_leaf and node.id != session.tree.root:
        schema["params"] = node.builder_ref["params"]
        schema["builder"] = node.builder_ref["name"]
    else:
        schema["choices"] = [
            {"index": i, "id": c, "label": session.tree.node(c).label}
            for i, c in enumerate(node.children)
        ]
    return {"node": node.id, "question": node.question, "schema": schema}


def _declare_variables(session: ElicitationSession, decls) -> None:
    if not isinstance(decls, list) or not decls:
        raise AnswerError("expected a non-empty list of variable declarations")
    existing = session.vars_by_key()
    for d in decls:
        try:
            kwargs = {}
            if d.get("lower") is not None:
                kwargs["lower"] = rat(d["lower"])
            if d.get("upper") is not None:
                kwargs["upper"] = rat(d["upper"])
            v = Variable(
                name=d["name"],
                indices=tuple(d.get("indices", ())),
                number_type=_NUMBER_TYPES[d.get("number_type", "nonneg_real")],
                **kwargs,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise AnswerError(f"bad variable declaration {d!r}: {e}") from None
        if v.key.startswith(blocks.AUX_PREFIX):
            raise AnswerError(f"variable name {v.key!r} uses the reserved prefix")
        if v.key in existing:
            raise AnswerError(f"variable {v.key!r} already declared")
        existing[v.key] = v
        session.variables.append(v)


def _apply(session: ElicitationSession, answer: dict) -> None:
    """Advance the session by one (already transcript-recorded) answer."""
    node = session.tree.node(session.cursor)

    nav = answer.get("navigation")
    if nav is not None:
        if nav == "FINISH_BRANCH":
            if session.cursor == session.tree.root:
                session.finished = True
            else:
                session.cursor = session.tree.root
            return
        if nav == "RESTART_BRANCH":
            if node.branch in BRANCHES:
                session.cursor = session.tree.branch_root(node.branch).id
            return
        raise AnswerError(f"unknown navigation {nav!r}")

    if "choice" in answer:
        if node.is_leaf:
            raise AnswerError("leaf nodes take parameters, not choices")
        idx = answer["choice"]
        if not isinstance(idx, int) or not 0 <= idx < len(node.children):
            raise AnswerError(f"choice index {idx!r} out of range")
        session.cursor = node.children[idx]
        return

    if "params" in answer:
        if not node.is_leaf:
            raise AnswerError("interior nodes take choices, not parameters")
        params = answer["params"]
        name = node.builder_ref["name"]
        if name == "declare_variables":
            _declare_variables(session, params.get("variables"))
        elif name == "set_objective":
            sense = _KINDS.get(params.get("sense"))
            if not isinstance(sense, ProblemSense):
                raise AnswerError("objective sense must be 'min' or 'max'")
            session.objective = Objective(sense, _decode_expr(params.get("expr", {"terms": []}),
                                                             session.vars_by_key()))
        else:
            if any(v == PLACEHOLDER for v in params.values()):
                session.pending.append((node.id, dict(params)))
            else:
                decoded = _decode_leaf_params(session, node, params)
                try:
                    block = BUILDERS[name](decoded, session._ctx)
                except blocks.BlockError as e:
                    raise AnswerError(str(e)) from None
                session.built.append((node.id, block))
        session.cursor = session.tree.branch_root(node.branch).id
        return

    raise AnswerError("answer must contain 'choice', 'params', or 'navigation'")


def _decode_leaf_params(session: ElicitationSession, node: OmtNode, params: dict) -> dict:
    spec = node.builder_ref["params"]
    known = {p["name"]: p for p in spec}
    decoded = dict(node.builder_ref.get("fixed", {}))
    for key, value in params.items():
        if key not in known:
            raise AnswerError(f"unexpected parameter {key!r}")
        decoded[key] = _decode_param(known[key]["type"], value, session.vars_by_key())
    for p in spec:
        if not p.get("optional", False) and p["name"] not in decoded:
            raise AnswerError(f"missing parameter {p['name']!r}")
    return decoded


def answer(session: ElicitationSession, a: dict) -> ElicitationSession:
    """Apply one answer (or BACK, which replays the shortened transcript)."""
    if session.finished and a.get("navigation") != "BACK":
        raise SessionComplete("SESSION_COMPLETE")
    if a.get("navigation") == "BACK":
        if not session.transcript:
            raise AnswerError("BACK at root with empty transcript")
        replayed = _replay_transcript(session.tree, session.transcript[:-1], session.id)
        _adopt(session, replayed)
        return session
    _apply(session, a)
    session.transcript.append(dict(a))
    return session


def _adopt(session: ElicitationSession, other: ElicitationSession) -> None:
    session.cursor = other.cursor
    session.transcript = other.transcript
    session.variables = other.variables
    session.objective = other.objective
    session.built = other.built
    session.pending = other.pending
    session.finished = other.finished
    session._ctx = other._ctx


def _replay_transcript(tree: OmtTree, transcript: Sequence[dict],
                       session_id: Optional[str] = None) -> ElicitationSession:
    s = ElicitationSession(tree)
    if session_id is not None:
        s.id = session_id
    for i, a in enumerate(transcript):
        try:
            _apply(s, a)
        except SessionError as e:
            raise AnswerError(f"invalid answer at step {i}: {e}") from None
        s.transcript.append(dict(a))
    return s


def emit_model(session: ElicitationSession, name: str = "elicited") -> Model:
    """Assemble and validate the model accumulated so far."""
    if session.pending:
        node_ids = sorted({n for n, _ in session.pending})
        raise SessionError(f"unfilled placeholder parameters at nodes {node_ids}")
    if not session.variables:
        raise SessionError("no decision variables declared")
    objective = session.objective or Objective(ProblemSense.MIN)
    variables = list(session.variables)
    constraints = []
    for _, block in session.built:
        variables.extend(block.aux_variables)
        constraints.extend(block.constraints)
    model = Model(name, tuple(variables), (), objective, tuple(constraints))
    report = validate(model)
    if not report.ok:
        raise SessionError(f"emitted model does not validate: {report.violations}")
    return model


def replay(tree: OmtTree, script: Sequence[dict], name: str = "elicited") -> Model:
    """Headless elicitation: fold a full answer script, then emit."""
    session = _replay_transcript(tree, script)
    return emit_model(session, name)


def session_to_json(session: ElicitationSession) -> str:
    doc = {"id": session.id, "tree_version": session.tree.version,
           "transcript": session.transcript}
    return json.dumps(doc, indent=2) + "\n"


def session_from_json(tree: OmtTree, text: str) -> ElicitationSession:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SessionError(f"session document does not parse: {e}") from None
    try:
        jsonschema.validate(doc, SESSION_SCHEMA)
    except jsonschema.ValidationError as e:
        raise SessionError(f"session schema violation at {list(e.absolute_path)}: "
                           f"{e.message}") from None
    if doc["tree_version"] != tree.version:
        raise SessionError("session was recorded against a different tree version")
    return _replay_transcript(tree, doc["transcript"], doc["id"])
