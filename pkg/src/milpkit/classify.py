"""Typology classification of canonical constraints.

`classify` tags a single constraint (most specific first, always ending
with a catch-all).  `classify_model` additionally detects multi-constraint
big-M patterns: conditional bounds, either-or / if-then pairs, and
fix-value-if pairs sharing a binary indicator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .blocks import BuiltBlock
from .model import Constraint, Model, Sense, canonicalize, rat
from .typology import CONDITIONAL_LOWER_NODE_ID, TypologyTag, tag

DEFAULT_BIGM_FACTOR = Fraction(10_000)


class NotCanonicalError(ValueError):
    pass


@dataclass(frozen=True)
class PatternGroup:
    """Constraints recognized jointly as one logic encoding."""

    constraint_names: tuple
    indicator: Optional[str]
    tag_names: tuple
    node_ids: tuple


@dataclass(frozen=True)
class ClassificationResult:
    tags: dict  # constraint name -> ordered list of TypologyTag
    pattern_groups: tuple

    def node_summary(self) -> set:
        """Primary node id per ungrouped constraint plus group node-id tuples."""
        grouped = {n for g in self.pattern_groups for n in g.constraint_names}
        out = set()
        for name, tags in self.tags.items():
            if name not in grouped and tags:
                out.add(tags[0].omt_node_id)
        for g in self.pattern_groups:
            out.add(tuple(sorted(g.node_ids)))
        return out


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


def _time_key(variable):
    """(family, period) if the variable ends in an integer index, else None."""
    if variable.indices:
        last = variable.indices[-1]
        try:
            return (variable.name, tuple(variable.indices[:-1]), int(last))
        except (TypeError, ValueError):
            return None
    head, _, taillabel = variable.name.rpartition("_")
    if head and taillabel.lstrip("-").isdigit():
        return (head, (), int(taillabel))
    return None


def _has_lag_pair(c: Constraint) -> bool:
    keyed = []
    for t in c.lhs.terms:
        k = _time_key(t.variable)
        if k is not None:
            keyed.append((k, t.coefficient))
    for (fam1, pre1, t1), c1 in keyed:
        for (fam2, pre2, t2), c2 in keyed:
            if fam1 == fam2 and pre1 == pre2 and t1 == t2 + 1 and c1 * c2 < 0:
                return True
    return False


def classify(c: Constraint, bigM_threshold: Optional[Fraction] = None) -> list:
    """Ordered typology tags for one canonical constraint."""
    if canonicalize(c) != c:
        raise NotCanonicalError(f"constraint {c.name!r} is not canonical")

    terms = c.lhs.terms
    coefs = [t.coefficient for t in terms]
    n = len(terms)
    all_binary = n > 0 and all(t.variable.is_binary for t in terms)
    all_unit = n > 0 and all(cf == 1 for cf in coefs)
    all_pm1 = n > 0 and all(cf in (1, -1) for cf in coefs)
    positives = [t for t in terms if t.coefficient > 0]
    negatives = [t for t in terms if t.coefficient < 0]
    continuous = n > 0 and all(not t.variable.is_integer for t in terms)

    names: list = []

    def fire(name: str):
        if name not in names:
            names.append(name)

    # Set constraints
    if all_binary and all_unit and c.rhs == 1:
        fire({Sense.GE: "SetCovering", Sense.EQ: "SetPartitioning", Sense.LE: "SetPacking"}[c.sense])
    if all_binary and all_unit and _is_int(c.rhs) and c.rhs >= 2 and c.sense in (Sense.GE, Sense.EQ):
        fire("WeightedSetCovering" if c.sense is Sense.GE else "WeightedSetPartitioning")
    if all_binary and all_pm1 and _is_int(c.rhs) and c.rhs >= 1 and c.sense in (Sense.GE, Sense.EQ):
        fire("GeneralizedSetCovering" if c.sense is Sense.GE else "GeneralizedSetPartitioning")

    # If-all-then, both shapes
    if all_binary and c.sense is Sense.LE and _is_int(c.rhs):
        m_pos = len(positives)
        if (m_pos >= 2 and all(t.coefficient == 1 for t in positives)
                and len(negatives) == 1 and 0 <= c.rhs <= m_pos - 1
                and negatives[0].coefficient == -(m_pos - c.rhs)):
            fire("IfAllThen")
        if (len(positives) == 1 and c.rhs == 0 and len(negatives) >= 2
                and all(t.coefficient == -1 for t in negatives)
                and positives[0].coefficient == len(negatives)):
            fire("IfAllThen")

    # Binary implication shape x_A - x_B <= 0
    if (all_binary and c.sense is Sense.LE and c.rhs == 0 and n == 2
            and len(positives) == 1 and len(negatives) == 1 and all_pm1):
        fire("ImpliesBinary")
        fire("OnlyIfAll")

    # Big-M candidate: an outsized coefficient on a binary variable
    if n >= 2:
        binary_mags = [abs(t.coefficient) for t in terms if t.variable.is_binary]
        other_mags = [abs(t.coefficient) for t in terms if not t.variable.is_binary]
        if binary_mags and other_mags:
            threshold = bigM_threshold if bigM_threshold is not None \
                else DEFAULT_BIGM_FACTOR * max(other_mags)
            if max(binary_mags) >= threshold:
                fire("IfThenBigM")

    # Fixing and assignment
    if n == 1 and c.sense is Sense.EQ:
        fire("FixToZero" if c.rhs == 0 else "AssignValue")

    # Balance family
    if c.sense is Sense.EQ and n >= 2 and positives and negatives:
        if _has_lag_pair(c):
            fire("InventoryBalance" if n >= 3 else "PeriodLink")
        fire("IOBalance")

    # Bounds
    if n == 1 and coefs[0] > 0:
        if c.sense is Sense.LE:
            fire("FixedUpperBound")
        elif c.sense is Sense.GE:
            fire("FixedLowerBound")
    if n >= 2 and len(negatives) == 1 and positives and c.rhs == 0:
        if c.sense is Sense.LE:
            fire("VariableUpperBound")
        elif c.sense is Sense.GE:
            fire("VariableLowerBound")

    # Knapsack
    if c.sense is Sense.LE and n >= 1 and not negatives and c.rhs >= 0:
        if all_binary:
            fire("ZeroOneKnapsack")
        elif continuous:
            fire("Knapsack")

    # Catch-all, always last
    fire({Sense.LE: "GeneralLE", Sense.EQ: "GeneralEQ", Sense.GE: "GeneralGE"}[c.sense])

    tags = [tag(name) for name in names]
    tags.sort(key=lambda t: -t.specificity)
    return tags


def _le_form(c: Constraint):
    """(terms-as-dict, rhs) of the constraint rewritten as lhs <= rhs."""
    sign = -1 if c.sense is Sense.GE else 1
    return ({t.variable.key: sign * t.coefficient for t in c.lhs.terms}, sign * c.rhs)


def _match_pair(a: Constraint, b: Constraint, key: str,
                bigM_threshold: Optional[Fraction]) -> Optional[PatternGroup]:
    ta, ra = _le_form(a)
    tb, rb = _le_form(b)
    ca, cb = ta.get(key, Fraction(0)), tb.get(key, Fraction(0))
    if ca == 0 or cb == 0:
        return None
    rest_a = tuple(sorted((k, v) for k, v in ta.items() if k != key))
    rest_b = tuple(sorted((k, v) for k, v in tb.items() if k != key))
    if not rest_a or not rest_b:
        return None

    # fix-value-if: same indicator coefficient in <= form, mirrored
    # expression, and rhs pair consistent with (C + M, M - C) for M = ca
    if (ca == cb and ca > 0 and ca == (ra + rb) / 2
            and rest_a == tuple(sorted((k, -v) for k, v in rest_b))):
        return PatternGroup((a.name, b.name), key, ("FixValueIf",),
                            (tag("FixValueIf").omt_node_id,))

    # conditional bound: expr - u*y <= 0 and expr - l*y >= 0, binary y
    raw_a = {t.variable.key: t.coefficient for t in a.lhs.terms}
    raw_b = {t.variable.key: t.coefficient for t in b.lhs.terms}
    if (raw_a.get(key, Fraction(0)) < 0 and raw_b.get(key, Fraction(0)) < 0
            and a.rhs == 0 and b.rhs == 0
            and {a.sense, b.sense} == {Sense.LE, Sense.GE}
            and sorted(k for k in raw_a if k != key) == sorted(k for k in raw_b if k != key)):
        up_first = a.sense is Sense.LE
        names = (a.name, b.name) if up_first else (b.name, a.name)
        return PatternGroup(names, key, ("ConditionalBound",),
                            (tag("ConditionalBound").omt_node_id,
                             CONDITIONAL_LOWER_NODE_ID))

    # either-or / if-then: opposite big-M signs on the indicator
    other_mags = [abs(v) for _, v in rest_a] + [abs(v) for _, v in rest_b]
    threshold = bigM_threshold if bigM_threshold is not None \
        else DEFAULT_BIGM_FACTOR * max(other_mags)
    if abs(ca) >= threshold and abs(cb) >= threshold and ca * cb < 0:
        return PatternGroup((a.name, b.name), key, ("EitherOr", "IfThenBigM"),
                            (tag("EitherOr").omt_node_id, tag("IfThenBigM").omt_node_id))
    return None


def _detect_groups(constraints: Sequence[Constraint], bigM_threshold: Optional[Fraction]) -> list:
    groups: list = []
    used: set = set()
    ineqs = [c for c in constraints if c.sense is not Sense.EQ]
    for i, a in enumerate(ineqs):
        for b in ineqs[i + 1:]:
            if a.name in used or b.name in used:
                continue
            shared = sorted(
                {t.variable.key for t in a.lhs.terms if t.variable.is_binary}
                & {t.variable.key for t in b.lhs.terms if t.variable.is_binary})
            for key in shared:
                g = _match_pair(a, b, key, bigM_threshold)
                if g is not None:
                    groups.append(g)
                    used.update((a.name, b.name))
                    break
    return groups


def classify_model(model: Model, bigM_threshold: Optional[Fraction] = None) -> ClassificationResult:
    """Classify every constraint and detect joint big-M pattern groups."""
    if bigM_threshold is not None:
        bigM_threshold = rat(bigM_threshold)
    canon = [canonicalize(c) for c in model.constraints]
    tags = {c.name: classify(c, bigM_threshold) for c in canon}
    groups = _detect_groups(canon, bigM_threshold)
    return ClassificationResult(tags, tuple(groups))


def classify_block(block: BuiltBlock, bigM_threshold: Optional[Fraction] = None) -> list:
    """Ordered candidate tag names for a BuiltBlock as a whole.

    Multi-constraint shapes (pattern groups, only-if-all fans, iff bundles)
    are recognized before falling back to the first constraint's tags.
    """
    canon = [canonicalize(c) for c in block.constraints]
    groups = _detect_groups(canon, bigM_threshold)
    if len(groups) == 1 and len(canon) == 2:
        return list(groups[0].tag_names)

    per = [classify(c, bigM_threshold) for c in canon]
    names = [[t.name for t in tags] for tags in per]

    if len(canon) >= 2 and all("OnlyIfAll" in ns for ns in names):
        lowers = [c.lhs.terms[0].variable.key for c in canon
                  if c.lhs.terms and c.lhs.terms[0].coefficient > 0]
        if len(set(lowers)) == 1:
            return ["OnlyIfAll", "ImpliesBinary"]
    if (len(canon) >= 2
            and sum("IfAllThen" in ns for ns in names) == 1
            and all("OnlyIfAll" in ns or "IfAllThen" in ns for ns in names)):
        return ["IffAll"]
    ordered: list = []
    for ns in names:
        for name in ns:
            if name not in ordered:
                ordered.append(name)
    return ordered
