from fractions import Fraction

import pytest

from milpkit.model import (
    Constraint,
    LinearExpr,
    Model,
    NumberType,
    Objective,
    ProblemSense,
    Sense,
    Variable,
)


def binvars(n, stem="x"):
    return [Variable(f"{stem}{i}", number_type=NumberType.BINARY) for i in range(1, n + 1)]


def expr(*pairs, constant=0):
    return LinearExpr.of(pairs, constant)


def random_model(rng):
    """A random valid model (always passes validate) for round-trip tests."""
    variables = []
    for i in range(rng.randint(1, 6)):
        ntype = rng.choice(list(NumberType))
        indices = (rng.randint(1, 3),) if rng.random() < 0.3 else ()
        if ntype is NumberType.BINARY:
            variables.append(Variable(f"v{i}", indices, ntype))
            continue
        lower = Fraction(rng.randint(0, 3), rng.randint(1, 4))
        upper = None if rng.random() < 0.4 else lower + Fraction(rng.randint(0, 20), rng.randint(1, 7))
        variables.append(Variable(f"v{i}", indices, ntype, lower, upper))

    def random_expr():
        pairs = []
        for v in variables:
            if rng.random() < 0.6:
                num = rng.randint(-9, 9)
                if num:
                    pairs.append((Fraction(num, rng.randint(1, 9)), v))
        return LinearExpr.of(pairs, Fraction(rng.randint(-5, 5)))

    constraints = tuple(
        Constraint(f"c{j}", random_expr(), rng.choice(list(Sense)),
                   Fraction(rng.randint(-20, 20), rng.randint(1, 6)))
        for j in range(rng.randint(0, 6))
    )
    objective = Objective(rng.choice(list(ProblemSense)), random_expr())
    return Model(f"random_{rng.randint(0, 10**6)}", tuple(variables), (), objective, constraints)


@pytest.fixture
def x3():
    return binvars(3)


def F(x):
    return Fraction(x)
