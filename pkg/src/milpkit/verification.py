"""Exhaustive certification of every logic encoding against its predicate.

Each case builds a block with the default deactivating constant, states
the intended logical condition as a plain Python predicate, and asks the
enumeration oracle whether the two agree exactly (auxiliary indicators
projected out).  This suite is the ground truth for the big-M encodings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

from . import blocks
from .model import LinearExpr, NumberType, Variable
from .oracle import EnumerationDomain, encoding_equivalent


@dataclass(frozen=True)
class CaseResult:
    name: str
    size: int
    equal: bool
    counterexamples: tuple


def _bins(n, stem):
    return [Variable(f"{stem}{i}", number_type=NumberType.BINARY) for i in range(1, n + 1)]


def _check(name, n, block, predicate) -> CaseResult:
    domain = EnumerationDomain.for_variables(
        tuple(block.original_variables()) + tuple(block.aux_variables))
    report = encoding_equivalent(block, predicate, domain)
    return CaseResult(name, n, report.equal, report.counterexamples)


def _cases_for(n: int) -> List[tuple]:
    a = Variable("A", number_type=NumberType.BINARY)
    bs = _bins(n, "B")
    xs = _bins(n, "x")
    y = Variable("y", number_type=NumberType.BINARY)
    z = Variable("z", number_type=NumberType.BINARY)
    sum_x = LinearExpr.of([(1, x) for x in xs])
    f = LinearExpr.of([(1, x) for x in xs], constant=-1)
    g = LinearExpr.of([(2, y)], constant=-1)
    k = (n + 1) // 2

    def val(p, v):
        return p[v.key]

    cases = [
        ("if_all_then", blocks.if_all_then(a, bs),
         lambda p: (not all(val(p, b) for b in bs)) or bool(val(p, a))),
        ("if_all_then[k-of-n]", blocks.if_all_then(a, bs, threshold=k),
         lambda p: (sum(val(p, b) for b in bs) < k) or bool(val(p, a))),
        ("only_if_all[disaggregated]", blocks.only_if_all(a, bs),
         lambda p: (not val(p, a)) or all(val(p, b) for b in bs)),
        ("only_if_all[aggregated]",
         blocks.only_if_all(a, bs, strength=blocks.Strength.AGGREGATED),
         lambda p: (not val(p, a)) or all(val(p, b) for b in bs)),
        ("iff_all", blocks.iff_all(a, bs),
         lambda p: bool(val(p, a)) == all(val(p, b) for b in bs)),
        ("either_or", blocks.either_or(f, g),
         lambda p: sum(val(p, x) for x in xs) - 1 <= 0 or 2 * val(p, y) - 1 <= 0),
        ("if_then_bigM", blocks.if_then_bigM(f, g),
         lambda p: not (sum(val(p, x) for x in xs) - 1 > 0) or 2 * val(p, y) - 1 <= 0),
        ("fix_value_if", blocks.fix_value_if(z, sum_x, 1),
         lambda p: (not val(p, z)) or sum(val(p, x) for x in xs) == 1),
        ("conditional_bound", blocks.conditional_bound(sum_x, 1, n, y),
         lambda p: val(p, y) <= sum(val(p, x) for x in xs) <= n * val(p, y)),
        ("implies_binary", blocks.implies_binary(
            LinearExpr.of([(1, a)]), LinearExpr.of([(1, y)])),
         lambda p: (not val(p, a)) or bool(val(p, y))),
    ]
    return cases


def run_encoding_suite(max_n: int = 10, inject_bad_m: bool = False) -> List[CaseResult]:
    results = []
    for n in range(1, max_n + 1):
        for name, block, predicate in _cases_for(n):
            results.append(_check(f"{name} n={n}", n, block, predicate))
    if inject_bad_m:
        # deliberately undersized M; must be caught by the oracle
        xs = _bins(3, "x")
        y = Variable("y", number_type=NumberType.BINARY)
        f = LinearExpr.of([(1, x) for x in xs], constant=-1)
        g = LinearExpr.of([(2, y)], constant=-1)
        block = blocks.either_or(f, g, M=1)
        results.append(_check(
            "either_or[injected M=1] n=3", 3, block,
            lambda p: sum(p[x.key] for x in xs) - 1 <= 0 or 2 * p[y.key] - 1 <= 0))
    return results
