"""Regenerate the embedded modelling-tree fixture.

Usage: python3 scripts/build_tree_fixture.py
Writes src/milpkit/data/omt_tree.json deterministically.
"""

import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "milpkit" / "data" / "omt_tree.json"

# The dozen node ids with externally fixed meanings keep reconstructed=False;
# everything else in the layout is our own arrangement.
PINNED = {2, 3, 7, 8, 9, 11, 12, 13, 14, 17, 19, 24}


def p(name, type_, optional=False):
    d = {"name": name, "type": type_}
    if optional:
        d["optional"] = True
    return d


def node(id_, label, branch, question, children=(), builder=None, params=None,
         fixed=None, alias_of=None, note=None):
    d = {"id": id_, "label": label, "branch": branch, "question": question,
         "children": list(children)}
    if builder is not None:
        ref = {"name": builder, "params": params or []}
        if fixed:
            ref["fixed"] = fixed
        d["builder_ref"] = ref
    if alias_of is not None:
        d["alias_of"] = alias_of
    d["reconstructed"] = id_ not in PINNED
    if note:
        d["note"] = note
    return d


C = "CONSTRAINTS"
EXPR = [p("expr", "expr")]
FG = [p("f", "expr"), p("g", "expr")]
ABS = [p("a", "binary_var"), p("bs", "binary_vars")]

nodes = [
    node(0, "Start", "ROOT", "What are the decisions?", children=[100, 101, 102]),

    node(100, "Decision variables", "DECISION_VARIABLES",
         "Which quantities can you choose?", children=[103]),
    node(103, "Declare decision variables", "DECISION_VARIABLES",
         "List each variable with its number type and bounds.",
         builder="declare_variables", params=[p("variables", "variable_decls")]),

    node(101, "Objective function", "OBJECTIVE",
         "What should be optimized, and in which direction?", children=[104]),
    node(104, "Set the objective", "OBJECTIVE",
         "Give the objective expression and whether to minimize or maximize it.",
         builder="set_objective", params=[p("sense", "choice:min|max"), p("expr", "expr")]),

    node(102, "Constraints", C,
         "What kind of requirement do you want to add?",
         children=[110, 111, 112, 113, 114]),

    node(110, "Bounds and capacities", C,
         "What limits a quantity from above or below?",
         children=[7, 2, 10, 8, 3, 9, 4, 5]),
    node(7, "Fixed upper bound (limited supply)", C,
         "Which expression is capped, and by what constant?",
         builder="bound", params=EXPR + [p("bound", "rational")],
         fixed={"kind": "supply_upper"}),
    node(2, "Variable upper bound (cap set by another decision)", C,
         "Which expression is capped, and by how many units of which variable?",
         builder="bound", params=EXPR + [p("bound_var", "variable"), p("u", "rational", True)],
         fixed={"kind": "supply_upper"}),
    node(10, "Fixed lower bound (demand to meet)", C,
         "Which expression has a floor, and what constant is the floor?",
         builder="bound", params=EXPR + [p("bound", "rational")],
         fixed={"kind": "demand_lower"}),
    node(8, "Variable lower bound (floor set by another decision)", C,
         "Which expression has a floor, and how many units of which variable set it?",
         builder="bound", params=EXPR + [p("bound_var", "variable"), p("u", "rational", True)],
         fixed={"kind": "demand_lower"}),
    node(3, "Conditional upper bound (capacity active only when a switch is on)", C,
         "Which expression is bounded, between which limits, under which binary switch?",
         builder="conditional_bound",
         params=EXPR + [p("lower", "rational"), p("upper", "rational"),
                        p("indicator", "binary_var")],
         note="emits the paired lower bound of node 9 as well"),
    node(9, "Conditional lower bound (minimum level only when a switch is on)", C,
         "Which expression is bounded, between which limits, under which binary switch?",
         builder="conditional_bound",
         params=EXPR + [p("lower", "rational"), p("upper", "rational"),
                        p("indicator", "binary_var")],
         alias_of=3, note="paired partner of node 3; one answer yields both rows"),
    node(4, "Knapsack capacity over continuous amounts", C,
         "Which amounts consume the capacity, at what rates, and what is the capacity?",
         builder="knapsack",
         params=[p("weights", "rational_list"), p("capacity", "rational"), p("vars", "vars")]),
    node(5, "Knapsack capacity over yes/no choices", C,
         "Which choices consume the capacity, at what weights, and what is the capacity?",
         builder="knapsack",
         params=[p("weights", "rational_list"), p("capacity", "rational"),
                 p("vars", "binary_vars")]),

    node(111, "Balancing equalities", C,
         "Which quantities must balance exactly?",
         children=[22, 12, 13, 14, 19]),
    node(22, "Input-output balance", C,
         "What flows in, and what must it equal flowing out?",
         builder="balance", params=[p("lhs_items", "expr"), p("rhs_items", "expr")],
         fixed={"kind": "io_balance"}),
    node(12, "Period-link balance between consecutive time slots", C,
         "Which quantity carries over from one time slot to the next?",
         builder="balance", params=[p("lhs_items", "expr"), p("rhs_items", "expr")],
         fixed={"kind": "period_link"}),
    node(13, "Assign-value equality", C,
         "Which expression is pinned, and to what value?",
         builder="balance", params=[p("lhs_items", "expr"), p("rhs_items", "expr")],
         fixed={"kind": "assign_value"}),
    node(14, "Inventory balance across time slots", C,
         "How does stock relate to the previous slot's stock, production, and use?",
         builder="balance", params=[p("lhs_items", "expr"), p("rhs_items", "expr")],
         fixed={"kind": "inventory"}),
    node(19, "Fix to zero (impossible decisions)", C,
         "Which variables can never be used?",
         builder="fix_to_zero", params=[p("vars", "vars")]),

    node(112, "Selecting from a set", C,
         "How many options from the set may or must be chosen?",
         children=[15, 16, 18, 17, 20, 21, 11]),
    node(15, "Set covering: at least one", C,
         "Which yes/no options must include at least one?",
         builder="set_covering", params=[p("vars", "binary_vars")]),
    node(16, "Weighted set covering: at least k", C,
         "Which options, and at least how many must be chosen?",
         builder="set_covering",
         params=[p("vars", "binary_vars"), p("weight_rhs", "rational")]),
    node(18, "Generalized set covering (options may count against)", C,
         "Which options, with which +1/-1 orientation, and what is the minimum?",
         builder="set_covering",
         params=[p("vars", "binary_vars"), p("weight_rhs", "rational"),
                 p("generalized_signs", "sign_list")]),
    node(17, "Set partitioning: exactly one", C,
         "Which yes/no options must include exactly one?",
         builder="set_partitioning", params=[p("vars", "binary_vars")]),
    node(20, "Weighted set partitioning: exactly k", C,
         "Which options, and exactly how many must be chosen?",
         builder="set_partitioning",
         params=[p("vars", "binary_vars"), p("weight_rhs", "rational")]),
    node(21, "Generalized set partitioning (options may count against)", C,
         "Which options, with which +1/-1 orientation, and what is the exact count?",
         builder="set_partitioning",
         params=[p("vars", "binary_vars"), p("weight_rhs", "rational"),
                 p("generalized_signs", "sign_list")]),
    node(11, "Set packing: at most one", C,
         "Which yes/no options are mutually exclusive?",
         builder="set_packing", params=[p("vars", "binary_vars")]),

    node(113, "Logical conditions", C,
         "What condition links some decisions to others?",
         children=[23, 25, 26, 24, 27, 28, 29]),
    node(23, "Either-or: at least one of two conditions holds", C,
         "Which two conditions (as expressions <= 0) are the alternatives?",
         builder="either_or", params=FG + [p("M", "rational", True)]),
    node(25, "If-then with a deactivating constant", C,
         "If which condition holds, then which other condition must hold?",
         builder="if_then_bigM", params=FG + [p("M", "rational", True)]),
    node(26, "Implication between 0/1 quantities", C,
         "Which 0/1 expression forces which other one?",
         builder="implies_binary", params=FG),
    node(24, "Aggregated if-then: outcome occurs if all of a set occur", C,
         "Which outcome is forced when all (or at least k) of which set occur?",
         builder="if_all_then", params=ABS + [p("threshold", "int", True)]),
    node(27, "Only-if: an outcome requires all of a set", C,
         "Which outcome may occur only if all of which set occur?",
         builder="only_if_all",
         params=ABS + [p("strength", "choice:aggregated|disaggregated", True)]),
    node(28, "If and only if all of a set occur", C,
         "Which outcome equals the conjunction of which set?",
         builder="iff_all", params=ABS),
    node(29, "Fix a value when a switch is on", C,
         "When which switch is on, which expression equals which constant?",
         builder="fix_value_if",
         params=[p("z", "binary_var"), p("f", "expr"), p("C", "rational"),
                 p("M", "rational", True)]),

    node(114, "General constraints", C,
         "State the inequality or equality directly.",
         children=[30, 31, 32]),
    node(30, "General at-most constraint", C,
         "Which expression stays at or below which value?",
         builder="general_constraint", params=EXPR + [p("rhs", "rational")],
         fixed={"sense": "le"}),
    node(31, "General equality constraint", C,
         "Which expression equals which value?",
         builder="general_constraint", params=EXPR + [p("rhs", "rational")],
         fixed={"sense": "eq"}),
    node(32, "General at-least constraint", C,
         "Which expression stays at or above which value?",
         builder="general_constraint", params=EXPR + [p("rhs", "rational")],
         fixed={"sense": "ge"}),
]

doc = {"version": "1", "root": 0, "nodes": nodes}
OUT.parent.mkdir(parents=True, exist_ok=True)
OUT.write_text(json.dumps(doc, indent=2) + "\n")
print(f"wrote {OUT} ({len(nodes)} nodes)")
