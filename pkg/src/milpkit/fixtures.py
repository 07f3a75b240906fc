"""Hand-built fixture models for the four worked case studies.

The constraints are small reconstructions of the published models'
shapes, kept just rich enough to exercise every cited typology node:

* chemical production scheduling  -> nodes {11, (3, 9), 14, 7}
* supply-chain production planning -> nodes {12, 13, 2, 8, (3, 9)}
* university course timetabling   -> nodes {17, 11, 24}
* multitrip VRP skeleton          -> nodes {17, 19, 2, 11}
"""

from __future__ import annotations

from .model import (
    Constraint,
    LinearExpr,
    Model,
    NumberType,
    Objective,
    ProblemSense,
    Sense,
    Variable,
)


def _bin(name, *indices):
    return Variable(name, indices, NumberType.BINARY)


def _cont(name, *indices, upper=None):
    return Variable(name, indices, NumberType.NONNEG_REAL, upper=upper)


def _int(name, *indices, upper=None):
    return Variable(name, indices, NumberType.NONNEG_INTEGER, upper=upper)


def _c(name, pairs, sense, rhs):
    return Constraint(name, LinearExpr.of(pairs), sense, rhs)


def chemical_scheduling() -> Model:
    """One unit, two tasks, two time slots, one material inventory."""
    x = {(task, t): _bin("x", task, t) for task in ("A", "B") for t in (1, 2)}
    batch = {t: _cont("batch", t, upper=50) for t in (1, 2)}
    cons = {t: _cont("cons", t, upper=30) for t in (1, 2)}
    s = {t: _cont("s", t, upper=100) for t in (0, 1, 2)}
    variables = tuple(x.values()) + tuple(batch.values()) + tuple(cons.values()) + tuple(s.values())

    constraints = []
    # at most one task starts on the unit per time slot
    for t in (1, 2):
        constraints.append(_c(f"one_task_{t}",
                              [(1, x[("A", t)]), (1, x[("B", t)])], Sense.LE, 1))
    # batch capacity applies only when task A actually starts
    for t in (1, 2):
        constraints.append(_c(f"batch_cap_up_{t}",
                              [(1, batch[t]), (-50, x[("A", t)])], Sense.LE, 0))
        constraints.append(_c(f"batch_cap_lo_{t}",
                              [(1, batch[t]), (-10, x[("A", t)])], Sense.GE, 0))
    # inventory: stock = previous stock + production - consumption
    for t in (1, 2):
        constraints.append(_c(f"inventory_{t}",
                              [(1, s[t]), (-1, s[t - 1]), (-1, batch[t]), (1, cons[t])],
                              Sense.EQ, 0))
    # storage limit
    constraints.append(_c("storage_cap", [(1, s[2])], Sense.LE, 100))

    objective = Objective(ProblemSense.MAX, LinearExpr.of([(1, cons[1]), (1, cons[2])]))
    return Model("chemical_scheduling", variables, (), objective, tuple(constraints))


def supply_chain_planning() -> Model:
    """Mid-term planning skeleton with integer quantities."""
    inv = {t: _int("inv", t, upper=10) for t in (1, 2)}
    q = _int("q", 1, upper=10)
    ship = _int("ship", upper=20)
    cap = _int("cap", upper=6)
    out = _int("out", upper=20)
    dem = _int("dem", upper=6)
    qty = _int("qty", upper=25)
    y = _bin("y")
    variables = (inv[1], inv[2], q, ship, cap, out, dem, qty, y)

    constraints = (
        # quantities balance across consecutive time slots
        _c("carry_over", [(1, inv[2]), (-1, inv[1])], Sense.EQ, 0),
        # assign a fixed quantity
        _c("assign_q", [(1, q)], Sense.EQ, 5),
        # variable upper / lower bounding by other decision quantities
        _c("ship_cap", [(1, ship), (-3, cap)], Sense.LE, 0),
        _c("out_floor", [(1, out), (-2, dem)], Sense.GE, 0),
        # bounds on qty apply only when the binary switch is on
        _c("qty_cap_up", [(1, qty), (-20, y)], Sense.LE, 0),
        _c("qty_cap_lo", [(1, qty), (-5, y)], Sense.GE, 0),
    )
    objective = Objective(ProblemSense.MIN, LinearExpr.of([(1, ship), (1, out)]))
    return Model("supply_chain_planning", variables, (), objective, constraints)


def course_timetabling() -> Model:
    """Sections assigned to professor/time pairs, all binary."""
    y = {(s, p): _bin("y", s, p) for s in (1, 2) for p in (1, 2)}
    X, Y, Z = _bin("xsel"), _bin("ysel"), _bin("zsel")
    variables = tuple(y.values()) + (X, Y, Z)

    constraints = (
        # each section gets exactly one professor
        _c("assign_s1", [(1, y[(1, 1)]), (1, y[(1, 2)])], Sense.EQ, 1),
        _c("assign_s2", [(1, y[(2, 1)]), (1, y[(2, 2)])], Sense.EQ, 1),
        # a professor takes at most one section
        _c("prof_p1", [(1, y[(1, 1)]), (1, y[(2, 1)])], Sense.LE, 1),
        # if X is selected then both Y and Z must be (aggregated form)
        _c("need_both", [(2, X), (-1, Y), (-1, Z)], Sense.LE, 0),
    )
    objective = Objective(ProblemSense.MAX, LinearExpr.of([(1, X)]))
    return Model("course_timetabling", variables, (), objective, constraints)


def multitrip_vrp_skeleton() -> Model:
    """Arc-selection skeleton: partition, impossible arcs, time budget."""
    arcs = {(i, j): _bin("x", i, j) for i in (1, 2, 3) for j in (1, 2, 3)}
    T = _cont("T", upper=100)
    variables = tuple(arcs.values()) + (T,)

    constraints = (
        # leave the depot exactly once
        _c("leave_depot", [(1, arcs[(1, 2)]), (1, arcs[(1, 3)])], Sense.EQ, 1),
        # self-loops are impossible decisions
        _c("no_self_loop", [(1, arcs[(1, 1)])], Sense.EQ, 0),
        # total travel time bounded by the decision variable T
        _c("time_budget", [(2, arcs[(1, 2)]), (3, arcs[(1, 3)]), (-1, T)], Sense.LE, 0),
        # vehicle capacity, set-packing shaped
        _c("capacity", [(1, arcs[(2, 3)]), (1, arcs[(3, 2)])], Sense.LE, 1),
    )
    objective = Objective(ProblemSense.MIN, LinearExpr.of([(1, T)]))
    return Model("multitrip_vrp", variables, (), objective, constraints)


# Node ids expected from classify_model().node_summary() per fixture;
# tuples are jointly-detected pattern groups.
EXPECTED_NODE_SUMMARIES = {
    "chemical_scheduling": {11, (3, 9), 14, 7},
    "supply_chain_planning": {12, 13, 2, 8, (3, 9)},
    "course_timetabling": {17, 11, 24},
    "multitrip_vrp": {17, 19, 2, 11},
}

ALL_FIXTURES = {
    "chemical_scheduling": chemical_scheduling,
    "supply_chain_planning": supply_chain_planning,
    "course_timetabling": course_timetabling,
    "multitrip_vrp": multitrip_vrp_skeleton,
}
