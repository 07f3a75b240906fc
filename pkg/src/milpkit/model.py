"""Core MILP model representation with exact rational arithmetic.

All coefficients, bounds, and right-hand sides are `fractions.Fraction`
values; nothing in this module ever touches floating point.  Every type is
an immutable (frozen) dataclass, so models can be shared freely between
threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

Rational = Union[int, str, Fraction]


def rat(value: Rational) -> Fraction:
    """Coerce an int, exact string ("3", "1/3", "0.25"), or Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational value")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class ProblemSense(enum.Enum):
    MIN = "min"
    MAX = "max"


class NumberType(enum.Enum):
    NONNEG_REAL = "nonneg_real"
    NONNEG_INTEGER = "nonneg_integer"
    BINARY = "binary"


class Sense(enum.Enum):
    LE = "<="
    EQ = "="
    GE = ">="

    def flipped(self) -> "Sense":
        if self is Sense.LE:
            return Sense.GE
        if self is Sense.GE:
            return Sense.LE
        return Sense.EQ


@dataclass(frozen=True)
class IndexSet:
    name: str
    members: tuple = ()

    def __post_init__(self):
        if not self.members:
            raise ValueError(f"index set {self.name!r} has no members")
        if len(set(self.members)) != len(self.members):
            raise ValueError(f"index set {self.name!r} has duplicate members")


@dataclass(frozen=True)
class Variable:
    """A scalar decision variable; indexed families are expanded instances."""

    name: str
    indices: tuple = ()
    number_type: NumberType = NumberType.NONNEG_REAL
    lower: Optional[Fraction] = Fraction(0)
    upper: Optional[Fraction] = None  # None means +infinity

    def __post_init__(self):
        # Bounds are only coerced here; contradictions are reported by
        # validate() so malformed models can be built and diagnosed.
        object.__setattr__(self, "indices", tuple(self.indices))
        lower, upper = self.lower, self.upper
        if self.number_type is NumberType.BINARY:
            if lower is None:
                lower = Fraction(0)
            if upper is None:
                upper = Fraction(1)
        object.__setattr__(self, "lower", None if lower is None else rat(lower))
        object.__setattr__(self, "upper", None if upper is None else rat(upper))

    @property
    def key(self) -> str:
        """Flat name used in assignments and the LP format (x_1_2 style)."""
        if not self.indices:
            return self.name
        return self.name + "_" + "_".join(str(i) for i in self.indices)

    @property
    def is_binary(self) -> bool:
        return self.number_type is NumberType.BINARY

    @property
    def is_integer(self) -> bool:
        return self.number_type in (NumberType.NONNEG_INTEGER, NumberType.BINARY)

    def sort_key(self):
        return (self.name, tuple(str(i) for i in self.indices))


@dataclass(frozen=True)
class Term:
    coefficient: Fraction
    variable: Variable

    def __post_init__(self):
        object.__setattr__(self, "coefficient", rat(self.coefficient))


@dataclass(frozen=True)
class LinearExpr:
    terms: tuple = ()
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "constant", rat(self.constant))

    @staticmethod
    def of(pairs: Iterable[tuple], constant: Rational = 0) -> "LinearExpr":
        """Build from (coefficient, Variable) pairs; merges and sorts."""
        terms = tuple(Term(rat(c), v) for c, v in pairs)
        return LinearExpr(terms, rat(constant)).normalized()

    def normalized(self) -> "LinearExpr":
        """Merge duplicate variables, drop zero terms, sort deterministically."""
        merged: dict = {}
        order: dict = {}
        for t in self.terms:
            k = t.variable.key
            merged[k] = merged.get(k, Fraction(0)) + t.coefficient
            order[k] = t.variable
        terms = tuple(
            Term(merged[k], order[k])
            for k in sorted(merged, key=lambda k: order[k].sort_key())
            if merged[k] != 0
        )
        return LinearExpr(terms, self.constant)

    def variables(self) -> tuple:
        return tuple(t.variable for t in self.terms)

    def coefficient_of(self, key: str) -> Fraction:
        for t in self.terms:
            if t.variable.key == key:
                return t.coefficient
        return Fraction(0)

    def __add__(self, other: "LinearExpr") -> "LinearExpr":
        return LinearExpr(self.terms + other.terms, self.constant + other.constant).normalized()

    def __sub__(self, other: "LinearExpr") -> "LinearExpr":
        return self + (-other)

    def __neg__(self) -> "LinearExpr":
        return LinearExpr(
            tuple(Term(-t.coefficient, t.variable) for t in self.terms), -self.constant
        )

    def scaled(self, factor: Rational) -> "LinearExpr":
        f = rat(factor)
        return LinearExpr(
            tuple(Term(f * t.coefficient, t.variable) for t in self.terms), f * self.constant
        ).normalized()

    def __str__(self) -> str:
        parts = [f"{t.coefficient} {t.variable.key}" for t in self.terms]
        if self.constant != 0 or not parts:
            parts.append(str(self.constant))
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class Constraint:
    name: str
    lhs: LinearExpr
    sense: Sense
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rhs", rat(self.rhs))

    def __str__(self) -> str:
        return f"{self.name}: {self.lhs} {self.sense.value} {self.rhs}"


@dataclass(frozen=True)
class Objective:
    sense: ProblemSense
    expr: LinearExpr = field(default_factory=LinearExpr)


@dataclass(frozen=True)
class Model:
    name: str
    variables: tuple = ()
    index_sets: tuple = ()
    objective: Objective = field(default_factory=lambda: Objective(ProblemSense.MIN))
    constraints: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "index_sets", tuple(self.index_sets))
        object.__setattr__(self, "constraints", tuple(self.constraints))

    def variable_table(self) -> dict:
        return {v.key: v for v in self.variables}

    def constraint(self, name: str) -> Constraint:
        for c in self.constraints:
            if c.name == name:
                return c
        raise KeyError(name)

    def with_added(self, variables: Sequence[Variable] = (),
                   constraints: Sequence[Constraint] = ()) -> "Model":
        return replace(
            self,
            variables=self.variables + tuple(variables),
            constraints=self.constraints + tuple(constraints),
        )


# An assignment maps variable keys (Variable.key) to exact rational values.
Assignment = Mapping[str, Fraction]


class UnresolvedVariableError(KeyError):
    """An expression references a variable the assignment/model lacks."""


def evaluate(expr: LinearExpr, assignment: Assignment) -> Fraction:
    """Exact value of the expression under the assignment."""
    total = expr.constant
    for t in expr.terms:
        try:
            total += t.coefficient * assignment[t.variable.key]
        except KeyError:
            raise UnresolvedVariableError(t.variable.key) from None
    return total


def satisfied(constraint: Constraint, assignment: Assignment) -> bool:
    value = evaluate(constraint.lhs, assignment)
    if constraint.sense is Sense.LE:
        return value <= constraint.rhs
    if constraint.sense is Sense.GE:
        return value >= constraint.rhs
    return value == constraint.rhs


def canonicalize(constraint: Constraint) -> Constraint:
    """Canonical form: merged sorted terms, zero lhs constant, rhs >= 0.

    A negative rhs is removed by negating both sides and flipping the
    sense (EQ stays EQ); the solution set is unchanged.
    """
    lhs = constraint.lhs.normalized()
    rhs = constraint.rhs - lhs.constant
    lhs = LinearExpr(lhs.terms, Fraction(0))
    sense = constraint.sense
    if rhs < 0:
        lhs = (-lhs).normalized()
        rhs = -rhs
        sense = sense.flipped()
    return Constraint(constraint.name, lhs, sense, rhs)


def objective_value(model: Model, assignment: Assignment) -> Fraction:
    return evaluate(model.objective.expr, assignment)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(model: Model) -> ValidationReport:
    """Collect all structural problems; an empty report means well-formed."""
    violations = []
    seen_vars = set()
    for v in model.variables:
        k = (v.name, v.indices)
        if k in seen_vars:
            violations.append(Violation("duplicate-variable", f"variable {v.key!r} declared twice"))
        seen_vars.add(k)
        if v.number_type is NumberType.BINARY and (v.lower != 0 or v.upper != 1):
            violations.append(Violation("binary-bounds", f"binary variable {v.key!r} must have bounds [0,1]"))
        if v.lower is not None and v.upper is not None and v.lower > v.upper:
            violations.append(Violation("bound-contradiction", f"variable {v.key!r}: lower > upper"))
        if v.lower is None or v.lower < 0:
            violations.append(Violation("negative-lower", f"variable {v.key!r} must be nonnegative"))
    seen_sets = set()
    for s in model.index_sets:
        if s.name in seen_sets:
            violations.append(Violation("duplicate-index-set", f"index set {s.name!r} declared twice"))
        seen_sets.add(s.name)
        if not s.members:
            violations.append(Violation("empty-index-set", f"index set {s.name!r} is empty"))
    table = {v.key for v in model.variables}
    for t in model.objective.expr.terms:
        if t.variable.key not in table:
            violations.append(Violation("unresolved-variable",
                                        f"objective references undeclared variable {t.variable.key!r}"))
    seen_cons = set()
    for c in model.constraints:
        if c.name in seen_cons:
            violations.append(Violation("duplicate-constraint", f"constraint {c.name!r} declared twice"))
        seen_cons.add(c.name)
        for t in c.lhs.terms:
            if t.variable.key not in table:
                violations.append(Violation(
                    "unresolved-variable",
                    f"constraint {c.name!r} references undeclared variable {t.variable.key!r}"))
    return ValidationReport(tuple(violations))
