from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from milpkit import blocks
from milpkit.classify import (
    ClassificationResult,
    NotCanonicalError,
    classify,
    classify_block,
    classify_model,
)
from milpkit.fixtures import ALL_FIXTURES, EXPECTED_NODE_SUMMARIES
from milpkit.model import (
    Constraint,
    LinearExpr,
    Model,
    NumberType,
    Sense,
    Variable,
    canonicalize,
)
from milpkit.typology import TAGS, explain, tag

from conftest import binvars, expr


def names(tags):
    return [t.name for t in tags]


def test_classify_covering(x3):
    c = canonicalize(Constraint("c", expr(*[(1, v) for v in x3]), Sense.GE, 1))
    assert names(classify(c)) == ["SetCovering", "GeneralizedSetCovering", "GeneralGE"]


def test_classify_zero_one_knapsack(x3):
    c = canonicalize(Constraint("c", expr((2, x3[0]), (3, x3[1]), (1, x3[2])), Sense.LE, 7))
    assert names(classify(c)) == ["ZeroOneKnapsack", "GeneralLE"]


def test_classify_aggregated_if_all_then(x3):
    c = canonicalize(Constraint("c", expr((2, x3[0]), (-1, x3[1]), (-1, x3[2])), Sense.LE, 0))
    got = names(classify(c))
    assert got[0] == "IfAllThen"
    assert "GeneralizedSetCovering" not in got and "GeneralizedSetPartitioning" not in got
    assert got[-1] == "GeneralLE"


def test_classify_rejects_noncanonical(x3):
    c = Constraint("c", expr((1, x3[0]), constant=1), Sense.LE, 5)
    with pytest.raises(NotCanonicalError):
        classify(c)


def test_classify_deterministic(x3):
    c = canonicalize(Constraint("c", expr(*[(1, v) for v in x3]), Sense.EQ, 2))
    assert classify(c) == classify(c)


def test_partitioning_outranks_assign_value():
    (x1,) = binvars(1)
    c = canonicalize(Constraint("c", expr((1, x1)), Sense.EQ, 1))
    got = names(classify(c))
    assert got.index("SetPartitioning") < got.index("AssignValue")


def test_totality_catch_all():
    y = Variable("y")
    z = Variable("z")
    c = canonicalize(Constraint("c", expr((Fraction(7, 3), y), (-2, z)), Sense.LE, 9))
    got = names(classify(c))
    assert got[-1] == "GeneralLE"
    c2 = canonicalize(Constraint("c", expr((1, y)), Sense.GE, 2))
    assert "GeneralGE" in names(classify(c2))


@st.composite
def canonical_constraints(draw):
    n = draw(st.integers(1, 6))
    kind = draw(st.sampled_from(["binary", "integer", "continuous"]))
    ntype = {"binary": NumberType.BINARY,
             "integer": NumberType.NONNEG_INTEGER,
             "continuous": NumberType.NONNEG_REAL}[kind]
    vars = [Variable(f"v{i}", number_type=ntype,
                     upper=None if ntype is NumberType.BINARY else 10)
            for i in range(n)]
    coefs = draw(st.lists(st.integers(-5, 5).filter(lambda x: x != 0),
                          min_size=n, max_size=n))
    sense = draw(st.sampled_from(list(Sense)))
    rhs = draw(st.integers(-10, 10))
    return canonicalize(Constraint("c", expr(*zip(coefs, vars)), sense, rhs))


@given(canonical_constraints())
@settings(max_examples=200)
def test_every_constraint_gets_a_tag_and_catch_all_last(c):
    tags = classify(c)
    assert tags
    assert tags[-1].name in ("GeneralLE", "GeneralEQ", "GeneralGE")
    specs = [t.specificity for t in tags]
    assert specs == sorted(specs, reverse=True)


@given(canonical_constraints())
@settings(max_examples=200)
def test_no_two_tags_share_a_specificity_rank(c):
    # mutual exclusion at equal specificity rank
    specs = [t.specificity for t in classify(c)]
    assert len(specs) == len(set(specs))


@given(st.integers(1, 10), st.sampled_from(["covering", "partitioning", "packing"]))
@settings(max_examples=60)
def test_set_builder_round_trip(n, family):
    vars = binvars(n)
    builder = {"covering": blocks.set_covering,
               "partitioning": blocks.set_partitioning,
               "packing": blocks.set_packing}[family]
    block = builder(vars)
    assert classify(block.constraints[0])[0] == block.tag


@given(st.integers(2, 8), st.integers(1, 10))
@settings(max_examples=60)
def test_weighted_builder_round_trip(n, rhs):
    vars = binvars(n)
    rhs = min(rhs, n)
    block = blocks.set_covering(vars, weight_rhs=rhs)
    assert classify(block.constraints[0])[0] == block.tag


@given(st.integers(1, 8))
@settings(max_examples=40)
def test_logic_builder_round_trips(n):
    a = Variable("A", number_type=NumberType.BINARY)
    bs = binvars(n, "B")
    for block in (blocks.if_all_then(a, bs) if n >= 2 else None,
                  blocks.only_if_all(a, bs),
                  blocks.iff_all(a, bs) if n >= 2 else None,
                  blocks.fix_to_zero(bs)):
        if block is None:
            continue
        got = classify_block(block)
        if block.tag.name == "OnlyIfAll" and n == 1:
            assert "OnlyIfAll" in got  # single constraint is also an implication
        else:
            assert got[0] == block.tag.name


def test_big_m_pair_round_trips():
    x = Variable("x", upper=10)
    y = Variable("y", upper=10)
    eo = blocks.either_or(expr((1, x), constant=-3), expr((1, y), constant=-4), M=10 ** 6)
    assert "EitherOr" in classify_block(eo)
    it = blocks.if_then_bigM(expr((1, x), constant=-2), expr((1, y), constant=-7), M=10 ** 6)
    assert "IfThenBigM" in classify_block(it)
    z = Variable("z", number_type=NumberType.BINARY)
    fv = blocks.fix_value_if(z, expr((1, x), (1, y)), 5, M=100)
    assert classify_block(fv)[0] == "FixValueIf"
    cb = blocks.conditional_bound(expr((1, x)), 2, 8, z)
    assert classify_block(cb)[0] == "ConditionalBound"


def test_implies_round_trip():
    xa, xb = binvars(2)
    block = blocks.implies_binary(expr((1, xa)), expr((1, xb)))
    assert classify(block.constraints[0])[0].name == "ImpliesBinary"


def test_classify_model_fixture_fidelity():
    for name, build in ALL_FIXTURES.items():
        result = classify_model(build())
        assert result.node_summary() == EXPECTED_NODE_SUMMARIES[name], name


def test_classify_model_empty():
    result = classify_model(Model("empty"))
    assert result.tags == {} and result.pattern_groups == ()


def test_classify_model_does_not_mutate():
    m = ALL_FIXTURES["chemical_scheduling"]()
    before = m.constraints
    classify_model(m)
    assert m.constraints == before


def test_explain_required_phrases():
    assert "at most one out of many" in explain(tag("SetPacking"))
    assert "previous time slot plus the new production" in explain(tag("InventoryBalance"))
    assert "Resource limit (supply)" in explain(tag("GeneralLE"))


def test_explain_all_tags_and_unknown():
    for t in TAGS.values():
        assert explain(t)
    with pytest.raises(KeyError):
        explain(tag("NoSuchTag"))
