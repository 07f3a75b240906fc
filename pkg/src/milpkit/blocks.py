"""Builders for the building-block constraint families.

Each builder returns a :class:`BuiltBlock` holding the constraints it
produced, any fresh auxiliary (indicator) variables, and the typology tag
of the family.  Fresh names come from a :class:`BuilderContext`; contexts
are cheap and must not be shared across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .model import (
    Constraint,
    LinearExpr,
    NumberType,
    Rational,
    Sense,
    Term,
    Variable,
    canonicalize,
    rat,
)
from .typology import TypologyTag, tag

AUX_PREFIX = "__aux_"


class BlockError(ValueError):
    """A builder precondition was violated."""


class UnboundedBigMError(BlockError):
    """big_m_default needs finite bounds on every variable involved."""


class BoundKind(enum.Enum):
    SUPPLY_UPPER = "supply_upper"
    DEMAND_LOWER = "demand_lower"


class BalanceKind(enum.Enum):
    IO_BALANCE = "io_balance"
    PERIOD_LINK = "period_link"
    ASSIGN_VALUE = "assign_value"
    INVENTORY = "inventory"


class Strength(enum.Enum):
    AGGREGATED = "aggregated"
    DISAGGREGATED = "disaggregated"


_BALANCE_TAGS = {
    BalanceKind.IO_BALANCE: "IOBalance",
    BalanceKind.PERIOD_LINK: "PeriodLink",
    BalanceKind.ASSIGN_VALUE: "AssignValue",
    BalanceKind.INVENTORY: "InventoryBalance",
}


@dataclass(frozen=True)
class BuiltBlock:
    constraints: tuple
    aux_variables: tuple
    tag: TypologyTag

    def variables(self) -> tuple:
        seen = {}
        for c in self.constraints:
            for t in c.lhs.terms:
                seen.setdefault(t.variable.key, t.variable)
        return tuple(seen.values())

    def original_variables(self) -> tuple:
        aux = {v.key for v in self.aux_variables}
        return tuple(v for v in self.variables() if v.key not in aux)


@dataclass
class BuilderContext:
    """Source of fresh constraint and auxiliary-variable names."""

    _counter: int = 0
    _stems: dict = field(default_factory=dict)

    def cname(self, stem: str) -> str:
        n = self._stems.get(stem, 0) + 1
        self._stems[stem] = n
        return f"{stem}_{n}"

    def indicator(self) -> Variable:
        self._counter += 1
        return Variable(f"{AUX_PREFIX}t{self._counter}", number_type=NumberType.BINARY)


def _ctx(ctx: Optional[BuilderContext]) -> BuilderContext:
    return ctx if ctx is not None else BuilderContext()


def _require_binary(vars: Sequence[Variable]) -> None:
    if not vars:
        raise BlockError("variable list must be non-empty")
    for v in vars:
        if not v.is_binary:
            raise BlockError(f"variable {v.key!r} must be binary")


def big_m_default(exprs: Sequence[LinearExpr]) -> Fraction:
    """Smallest deactivating constant: max over exprs of sup|expr| + 1.

    The supremum is over the box of variable bounds (interval arithmetic);
    any variable without a finite upper bound is an error and the caller
    must supply M explicitly.
    """
    worst = Fraction(0)
    for e in exprs:
        lo = hi = e.constant
        for t in e.terms:
            v = t.variable
            if v.lower is None or v.upper is None:
                raise UnboundedBigMError(f"variable {v.key!r} is unbounded")
            a, b = t.coefficient * v.lower, t.coefficient * v.upper
            lo += min(a, b)
            hi += max(a, b)
        worst = max(worst, abs(lo), abs(hi))
    return worst + 1


def _resolve_m(m: Optional[Rational], exprs: Sequence[LinearExpr]) -> Fraction:
    if m is None:
        return big_m_default(exprs)
    m = rat(m)
    if m <= 0:
        raise BlockError("big-M must be positive")
    return m


def _unit_sum(vars: Sequence[Variable], signs: Optional[Sequence[int]]) -> LinearExpr:
    if signs is None:
        signs = [1] * len(vars)
    if len(signs) != len(vars):
        raise BlockError("one sign per variable required")
    if any(s not in (1, -1) for s in signs):
        raise BlockError("signs must be +1 or -1")
    return LinearExpr.of((s, v) for s, v in zip(signs, vars))


def _set_constraint(vars, weight_rhs, generalized_signs, sense, family, ctx):
    _require_binary(vars)
    weight_rhs = rat(weight_rhs)
    if weight_rhs < 1 or weight_rhs.denominator != 1:
        raise BlockError("weight_rhs must be a positive integer")
    if generalized_signs is not None:
        name = f"Generalized{family}"
    elif weight_rhs >= 2:
        name = f"Weighted{family}"
    else:
        name = family
    c = Constraint(ctx.cname(family.lower()), _unit_sum(vars, generalized_signs), sense, weight_rhs)
    return BuiltBlock((canonicalize(c),), (), tag(name))


def set_covering(vars: Sequence[Variable], weight_rhs: Rational = 1,
                 generalized_signs: Optional[Sequence[int]] = None,
                 ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """At least `weight_rhs` of the binary vars (with optional +/-1 signs)."""
    return _set_constraint(vars, weight_rhs, generalized_signs, Sense.GE, "SetCovering", _ctx(ctx))


def set_partitioning(vars: Sequence[Variable], weight_rhs: Rational = 1,
                     generalized_signs: Optional[Sequence[int]] = None,
                     ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """Exactly `weight_rhs` of the binary vars."""
    return _set_constraint(vars, weight_rhs, generalized_signs, Sense.EQ, "SetPartitioning", _ctx(ctx))


def set_packing(vars: Sequence[Variable], ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """At most one of the binary vars."""
    ctx = _ctx(ctx)
    _require_binary(vars)
    c = Constraint(ctx.cname("setpacking"), _unit_sum(vars, None), Sense.LE, 1)
    return BuiltBlock((canonicalize(c),), (), tag("SetPacking"))


def knapsack(weights: Sequence[Rational], capacity: Rational, vars: Sequence[Variable],
             ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """Weighted capacity limit over all-binary or all-continuous vars."""
    ctx = _ctx(ctx)
    if not vars:
        raise BlockError("variable list must be non-empty")
    if len(weights) != len(vars):
        raise BlockError("one weight per variable required")
    weights = [rat(w) for w in weights]
    if any(w <= 0 for w in weights):
        raise BlockError("weights must be positive")
    capacity = rat(capacity)
    if capacity < 0:
        raise BlockError("capacity must be nonnegative")
    types = {v.number_type for v in vars}
    if types == {NumberType.BINARY}:
        name = "ZeroOneKnapsack"
    elif types == {NumberType.NONNEG_REAL}:
        name = "Knapsack"
    else:
        raise BlockError("knapsack variables must be all binary or all continuous")
    c = Constraint(ctx.cname("knapsack"), LinearExpr.of(zip(weights, vars)), Sense.LE, capacity)
    return BuiltBlock((canonicalize(c),), (), tag(name))


def bound(expr: LinearExpr, kind: BoundKind, bound: Optional[Rational] = None,
          bound_var: Optional[Variable] = None, u: Rational = 1,
          ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """Fixed or variable supply upper bound / demand lower bound."""
    ctx = _ctx(ctx)
    if not expr.terms:
        raise BlockError("expression must be non-empty")
    if (bound is None) == (bound_var is None):
        raise BlockError("exactly one of bound or bound_var required")
    upper = kind is BoundKind.SUPPLY_UPPER
    sense = Sense.LE if upper else Sense.GE
    if bound_var is not None:
        u = rat(u)
        if u <= 0:
            raise BlockError("bound multiplier u must be positive")
        lhs = expr - LinearExpr.of([(u, bound_var)])
        name = "VariableUpperBound" if upper else "VariableLowerBound"
        c = Constraint(ctx.cname("bound"), lhs, sense, 0)
    else:
        name = "FixedUpperBound" if upper else "FixedLowerBound"
        c = Constraint(ctx.cname("bound"), expr, sense, rat(bound))
    return BuiltBlock((canonicalize(c),), (), tag(name))


def balance(lhs_items: LinearExpr, rhs_items: LinearExpr, kind: BalanceKind,
            ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """Equality lhs_items = rhs_items, tagged by usage kind."""
    ctx = _ctx(ctx)
    if not lhs_items.terms and not rhs_items.terms:
        raise BlockError("balance needs at least one variable")
    if not lhs_items.terms and kind is not BalanceKind.ASSIGN_VALUE:
        raise BlockError("lhs must reference variables")
    c = Constraint(ctx.cname("balance"), lhs_items - rhs_items, Sense.EQ, 0)
    return BuiltBlock((canonicalize(c),), (), tag(_BALANCE_TAGS[kind]))


def fix_to_zero(vars: Sequence[Variable], ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """One x = 0 equality per variable (impossible decisions)."""
    ctx = _ctx(ctx)
    if not vars:
        raise BlockError("variable list must be non-empty")
    for v in vars:
        if v.lower is None or v.lower < 0:
            raise BlockError(f"variable {v.key!r} must be nonnegative")
    cons = tuple(
        canonicalize(Constraint(ctx.cname("fixzero"), LinearExpr.of([(1, v)]), Sense.EQ, 0))
        for v in vars
    )
    return BuiltBlock(cons, (), tag("FixToZero"))


def either_or(f: LinearExpr, g: LinearExpr, M: Optional[Rational] = None,
              ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """Either f <= 0 or g <= 0, via indicator t: f <= Mt and g <= M(1-t)."""
    ctx = _ctx(ctx)
    M = _resolve_m(M, (f, g))
    t = ctx.indicator()
    c1 = Constraint(ctx.cname("eitheror"), f - LinearExpr.of([(M, t)]), Sense.LE, 0)
    c2 = Constraint(ctx.cname("eitheror"), g + LinearExpr.of([(M, t)]), Sense.LE, M)
    return BuiltBlock((canonicalize(c1), canonicalize(c2)), (t,), tag("EitherOr"))


def if_then_bigM(f: LinearExpr, g: LinearExpr, M: Optional[Rational] = None,
                 ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """If f > 0 then g <= 0, via indicator t: g <= Mt and f <= M(1-t)."""
    ctx = _ctx(ctx)
    M = _resolve_m(M, (f, g))
    t = ctx.indicator()
    c1 = Constraint(ctx.cname("ifthen"), g - LinearExpr.of([(M, t)]), Sense.LE, 0)
    c2 = Constraint(ctx.cname("ifthen"), f + LinearExpr.of([(M, t)]), Sense.LE, M)
    return BuiltBlock((canonicalize(c1), canonicalize(c2)), (t,), tag("IfThenBigM"))


def conditional_bound(expr: LinearExpr, lower: Rational, upper: Rational,
                      indicator: Variable, ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """l*y <= expr <= u*y for indicator y: capacity holds only when y = 1."""
    ctx = _ctx(ctx)
    if not indicator.is_binary:
        raise BlockError("indicator must be binary")
    lower, upper = rat(lower), rat(upper)
    if lower > upper:
        raise BlockError("lower exceeds upper")
    c1 = Constraint(ctx.cname("condbound"), expr - LinearExpr.of([(upper, indicator)]), Sense.LE, 0)
    c2 = Constraint(ctx.cname("condbound"), expr - LinearExpr.of([(lower, indicator)]), Sense.GE, 0)
    return BuiltBlock((canonicalize(c1), canonicalize(c2)), (), tag("ConditionalBound"))


def implies_binary(f: LinearExpr, g: LinearExpr, ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """If the 0/1-valued f occurs then g occurs: f <= g."""
    ctx = _ctx(ctx)
    c = Constraint(ctx.cname("implies"), f - g, Sense.LE, 0)
    return BuiltBlock((canonicalize(c),), (), tag("ImpliesBinary"))


def if_all_then(a: Variable, bs: Sequence[Variable], threshold: Optional[int] = None,
                ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """A occurs if all (or at least `threshold`) of the Bs occur.

    Default single constraint: sum(B) <= n - 1 + A.  The threshold k-of-n
    variant (sum(B) - (n-k+1) A <= k - 1) is an extrapolated generalization.
    """
    ctx = _ctx(ctx)
    _require_binary(bs)
    _require_binary([a])
    n = len(bs)
    k = n if threshold is None else threshold
    if not 1 <= k <= n:
        raise BlockError("threshold must be within 1..len(bs)")
    lhs = _unit_sum(bs, None) - LinearExpr.of([(n - k + 1, a)])
    c = Constraint(ctx.cname("ifallthen"), lhs, Sense.LE, k - 1)
    return BuiltBlock((canonicalize(c),), (), tag("IfAllThen"))


def only_if_all(a: Variable, bs: Sequence[Variable],
                strength: Strength = Strength.DISAGGREGATED,
                ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """A occurs only if all Bs occur.

    DISAGGREGATED (default, the stronger form): A <= Bj for every j.
    AGGREGATED: the single constraint n*A <= sum(B).
    """
    ctx = _ctx(ctx)
    _require_binary(bs)
    _require_binary([a])
    if strength is Strength.AGGREGATED:
        lhs = LinearExpr.of([(len(bs), a)]) - _unit_sum(bs, None)
        cons = (canonicalize(Constraint(ctx.cname("onlyifall"), lhs, Sense.LE, 0)),)
        return BuiltBlock(cons, (), tag("IfAllThen"))
    cons = tuple(
        canonicalize(Constraint(ctx.cname("onlyifall"),
                                LinearExpr.of([(1, a), (-1, b)]), Sense.LE, 0))
        for b in bs
    )
    return BuiltBlock(cons, (), tag("OnlyIfAll"))


def iff_all(a: Variable, bs: Sequence[Variable], ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """A occurs if and only if all Bs occur (if_all_then + only_if_all)."""
    ctx = _ctx(ctx)
    fwd = if_all_then(a, bs, ctx=ctx)
    back = only_if_all(a, bs, ctx=ctx)
    return BuiltBlock(fwd.constraints + back.constraints, (), tag("IffAll"))


def fix_value_if(z: Variable, f: LinearExpr, C: Rational, M: Optional[Rational] = None,
                 ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """If z = 1 then f = C: -M(1-z) + f <= C and M(1-z) + f >= C."""
    ctx = _ctx(ctx)
    _require_binary([z])
    C = rat(C)
    M = _resolve_m(M, (f - LinearExpr(constant=C),))
    mz = LinearExpr.of([(M, z)], constant=-M)
    c1 = Constraint(ctx.cname("fixvalue"), f + mz, Sense.LE, C)
    c2 = Constraint(ctx.cname("fixvalue"), f - mz, Sense.GE, C)
    return BuiltBlock((canonicalize(c1), canonicalize(c2)), (), tag("FixValueIf"))


def general_constraint(expr: LinearExpr, sense: Sense, rhs: Rational,
                       ctx: Optional[BuilderContext] = None) -> BuiltBlock:
    """Catch-all ax <= / = / >= b constraint."""
    ctx = _ctx(ctx)
    if not expr.terms:
        raise BlockError("expression must be non-empty")
    name = {Sense.LE: "GeneralLE", Sense.EQ: "GeneralEQ", Sense.GE: "GeneralGE"}[sense]
    c = Constraint(ctx.cname("general"), expr, sense, rat(rhs))
    return BuiltBlock((canonicalize(c),), (), tag(name))
