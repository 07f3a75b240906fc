"""Constraint typology tags: tree node ids, canonical names, specificity.

Node ids 2, 3, 7, 8, 9, 11, 12, 13, 14, 17, 19 and 24 are pinned to fixed
meanings (they are cited by the elicitation-tree case studies and tests
assert them verbatim).  The remaining ids fill in the typology in family
order and carry no external meaning.  Node 9 is the lower half of the
conditional-bound pair; the ConditionalBound tag itself sits on node 3
and pattern groups report both ids.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TypologyTag:
    omt_node_id: int
    name: str
    specificity: int

    def __str__(self) -> str:
        return f"{self.name}({self.omt_node_id})"


# Node id of the conditional lower-bound half (paired with node 3).
CONDITIONAL_LOWER_NODE_ID = 9

# name -> (node id, specificity).  Higher specificity = more specific rule.
_TAG_TABLE = {
    # Set constraints (binary, unit or +/-1 coefficients)
    "SetCovering": (15, 80),
    "SetPartitioning": (17, 80),
    "SetPacking": (11, 80),
    "WeightedSetCovering": (16, 75),
    "WeightedSetPartitioning": (20, 75),
    "GeneralizedSetCovering": (18, 70),
    "GeneralizedSetPartitioning": (21, 70),
    # Logic shapes
    "IfAllThen": (24, 68),
    "ImpliesBinary": (26, 66),
    "OnlyIfAll": (27, 64),
    "IffAll": (28, 63),
    "EitherOr": (23, 62),
    "IfThenBigM": (25, 61),
    "FixValueIf": (29, 60),
    "ConditionalBound": (3, 58),
    # Fixing / assignment
    "FixToZero": (19, 56),
    "AssignValue": (13, 54),
    # Balance family (Type II)
    "InventoryBalance": (14, 52),
    "PeriodLink": (12, 51),
    "IOBalance": (22, 50),
    # Bounds (Type I)
    "FixedUpperBound": (7, 46),
    "FixedLowerBound": (10, 46),
    "VariableUpperBound": (2, 44),
    "VariableLowerBound": (8, 44),
    # Knapsack
    "ZeroOneKnapsack": (5, 40),
    "Knapsack": (4, 40),
    # Catch-all roots (lowest specificity; exactly one fires per sense)
    "GeneralLE": (30, 0),
    "GeneralEQ": (31, 0),
    "GeneralGE": (32, 0),
}

TAGS = {name: TypologyTag(node_id, name, spec) for name, (node_id, spec) in _TAG_TABLE.items()}
TAGS_BY_NODE = {t.omt_node_id: t for t in TAGS.values()}
ALL_TAG_NAMES = tuple(TAGS)


def tag(name: str) -> TypologyTag:
    try:
        return TAGS[name]
    except KeyError:
        raise KeyError(f"unknown typology tag {name!r}") from None


_EXPLANATIONS = {
    "SetCovering": (
        "Choice of at least one out of many: a sum of binary variables with unit "
        "coefficients must be greater than or equal to 1, so at least one option in "
        "the set is selected. Commonly used for assignment and allocation requirements."
    ),
    "SetPartitioning": (
        "Choice of exactly one out of many: a sum of binary variables with unit "
        "coefficients equals 1, so precisely one option in the set is selected."
    ),
    "SetPacking": (
        "Choice of at most one out of many: a sum of binary variables with unit "
        "coefficients is at most 1, so selecting two or more options together is forbidden."
    ),
    "WeightedSetCovering": (
        "Choice of at least n out of many for n greater than 1: a unit-coefficient sum "
        "of binary variables with an integer right-hand side of at least 2."
    ),
    "WeightedSetPartitioning": (
        "Choice of exactly n out of many for n greater than 1: a unit-coefficient sum "
        "of binary variables equal to an integer right-hand side of at least 2."
    ),
    "GeneralizedSetCovering": (
        "A covering-style inequality whose coefficients are drawn from {-1, 0, 1} with "
        "an integer right-hand side; negative coefficients let complemented choices count."
    ),
    "GeneralizedSetPartitioning": (
        "A partitioning-style equality whose coefficients are drawn from {-1, 0, 1} "
        "with an integer right-hand side."
    ),
    "Knapsack": (
        "A resource limit with positive rational weights over nonnegative continuous "
        "quantities: the weighted sum must not exceed a fixed capacity."
    ),
    "ZeroOneKnapsack": (
        "A resource limit with positive weights over binary selections: the total "
        "weight of the chosen items must not exceed a fixed capacity."
    ),
    "FixedUpperBound": (
        "Resource limit (supply) constraints: a quantity expression is bounded above "
        "by a fixed constant, such as an upper bound on a storage limit."
    ),
    "FixedLowerBound": (
        "Demand constraints: a quantity expression must reach at least a fixed "
        "constant, so a required demand is satisfied."
    ),
    "VariableUpperBound": (
        "A supply-style upper bound whose limit is itself a decision variable: the "
        "bounded expression minus a multiple of the bounding variable is at most zero."
    ),
    "VariableLowerBound": (
        "A demand-style lower bound whose threshold is itself a decision variable."
    ),
    "ConditionalBound": (
        "Upper and lower bounds that apply only when an associated binary indicator "
        "is switched on; when the indicator is zero the bounded quantity is forced to "
        "zero. Typical for batch-size capacities that hold only if the batch runs."
    ),
    "IOBalance": (
        "An equality used to balance (equate) input and output quantity, such as "
        "material entering and leaving a process."
    ),
    "PeriodLink": (
        "An equality that balances the flow or quantities over two consecutive time "
        "periods, linking a quantity at one time slot to the previous one."
    ),
    "AssignValue": (
        "An equality constraint for assigning quantities: it pins an expression or "
        "variable to a given value, including setting initial conditions."
    ),
    "InventoryBalance": (
        "Inventory bookkeeping: the stock of a material at a time slot equals the "
        "inventory at the previous time slot plus the new production and minus the "
        "consumption. The same shape covers flow balance in routing, where every "
        "visited stop needs a predecessor and a successor."
    ),
    "FixToZero": (
        "Fix variables to zero to represent impossible decisions, removing those "
        "options from the feasible region."
    ),
    "EitherOr": (
        "Either-or condition: at least one of two linear conditions must hold. A "
        "fresh binary indicator and a sufficiently large constant deactivate the "
        "other condition."
    ),
    "IfThenBigM": (
        "If-then condition between two linear conditions, encoded with a fresh "
        "binary indicator and a sufficiently large deactivating constant."
    ),
    "ImpliesBinary": (
        "If one 0/1-valued expression occurs then another must occur: the first "
        "expression is at most the second."
    ),
    "IfAllThen": (
        "An outcome occurs if all of a set of prerequisites occur: the sum of the "
        "prerequisite indicators is at most their count minus one plus the outcome "
        "indicator. An aggregated variant scales the outcome side instead."
    ),
    "OnlyIfAll": (
        "An outcome occurs only if all of a set of prerequisites occur: the outcome "
        "indicator is at most each prerequisite indicator individually."
    ),
    "IffAll": (
        "An outcome occurs if and only if all of a set of prerequisites occur: the "
        "if-all-then and only-if-all families are used together."
    ),
    "FixValueIf": (
        "If an indicator is on then an expression must equal a given constant; two "
        "big-M inequalities pin the value when the indicator is 1 and relax both "
        "sides when it is 0."
    ),
    "GeneralLE": (
        "A general less-than-or-equal constraint. Resource limit (supply) constraints "
        "take this form: a linear expression bounded above by a constant."
    ),
    "GeneralEQ": (
        "A general equality constraint; balancing constraints equating two "
        "quantities take this form."
    ),
    "GeneralGE": (
        "A general greater-than-or-equal constraint; demand constraints that require "
        "a minimum quantity take this form."
    ),
}


def explain(t: TypologyTag) -> str:
    """Canonical one-paragraph description of a tag; stable across runs."""
    try:
        return _EXPLANATIONS[t.name]
    except KeyError:
        raise KeyError(f"unknown typology tag {t.name!r}") from None
