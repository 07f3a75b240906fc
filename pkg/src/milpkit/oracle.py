"""Desk-scale ground truth by exhaustive enumeration.

Enumerates every assignment over finite variable domains, checks
feasibility exactly, finds brute-force optima, and certifies that a
big-M logic encoding projects onto exactly the intended predicate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .blocks import BuiltBlock
from .model import Model, NumberType, Variable, objective_value, rat, satisfied

DEFAULT_CAP = 2 ** 20


class EnumerationError(ValueError):
    pass


class DomainTooLargeError(EnumerationError):
    pass


@dataclass(frozen=True)
class EnumerationDomain:
    """Finite value lists per variable key; continuous grids must be explicit."""

    values: Mapping[str, tuple]
    grid_keys: frozenset = frozenset()  # continuous vars approximated by a grid
    cap: int = DEFAULT_CAP

    def size(self) -> int:
        n = 1
        for vals in self.values.values():
            n *= len(vals)
        return n

    @staticmethod
    def for_variables(variables: Sequence[Variable],
                      grids: Optional[Mapping[str, Sequence]] = None,
                      cap: int = DEFAULT_CAP) -> "EnumerationDomain":
        """Binary -> {0,1}; bounded integer -> full range; continuous needs a grid."""
        grids = grids or {}
        values = {}
        grid_keys = set()
        for v in variables:
            if v.key in grids:
                values[v.key] = tuple(rat(x) for x in grids[v.key])
                if not v.is_integer:
                    grid_keys.add(v.key)
                continue
            if v.number_type is NumberType.BINARY:
                values[v.key] = (Fraction(0), Fraction(1))
            elif v.number_type is NumberType.NONNEG_INTEGER:
                if v.lower is None or v.upper is None:
                    raise EnumerationError(f"integer variable {v.key!r} is unbounded")
                lo, hi = v.lower, v.upper
                values[v.key] = tuple(Fraction(i) for i in range(-(-lo.numerator // lo.denominator),
                                                                 hi.numerator // hi.denominator + 1))
            else:
                raise EnumerationError(f"continuous variable {v.key!r} needs an explicit grid")
        d = EnumerationDomain(values, frozenset(grid_keys), cap)
        if d.size() > cap:
            raise DomainTooLargeError(f"domain size {d.size()} exceeds cap {cap}")
        return d

    def assignments(self) -> Iterable[dict]:
        if self.size() > self.cap:
            raise DomainTooLargeError(f"domain size {self.size()} exceeds cap {self.cap}")
        keys = sorted(self.values)
        for combo in itertools.product(*(self.values[k] for k in keys)):
            yield dict(zip(keys, combo))


def enumerate_feasible(model: Model, domain: EnumerationDomain) -> list:
    """All assignments in the domain satisfying every constraint."""
    out = []
    for a in domain.assignments():
        if all(satisfied(c, a) for c in model.constraints):
            out.append(a)
    return out


INFEASIBLE = object()


def brute_force_optimum(model: Model, domain: EnumerationDomain):
    """Exact optimum over the enumerated feasible set.

    Returns (value, list of optimal assignments), or (INFEASIBLE, []) when
    nothing is feasible.
    """
    feasible = enumerate_feasible(model, domain)
    if not feasible:
        return INFEASIBLE, []
    values = [objective_value(model, a) for a in feasible]
    best = (max if model.objective.sense.value == "max" else min)(values)
    return best, [a for a, v in zip(feasible, values) if v == best]


@dataclass(frozen=True)
class EquivalenceReport:
    equal: bool
    counterexamples: tuple
    encoded_size: int
    predicate_size: int


def encoding_equivalent(block: BuiltBlock,
                        predicate: Callable[[Mapping[str, Fraction]], bool],
                        domain: EnumerationDomain,
                        max_counterexamples: int = 10) -> EquivalenceReport:
    """Compare the encoding's projection onto original variables with the predicate.

    Auxiliary (indicator) variables are projected out existentially: an
    original-variable assignment is encoded-feasible iff some extension to
    the aux variables satisfies every block constraint.
    """
    aux = [v for v in block.aux_variables]
    original_keys = sorted(set(domain.values) - {v.key for v in aux})
    aux_domain = EnumerationDomain.for_variables(aux, cap=domain.cap) if aux else None

    encoded = set()
    truth = set()
    base_domain = EnumerationDomain({k: domain.values[k] for k in original_keys},
                                    domain.grid_keys, domain.cap)
    for a in base_domain.assignments():
        point = tuple(a[k] for k in original_keys)
        if predicate(a):
            truth.add(point)
        if aux_domain is None:
            feasible = all(satisfied(c, a) for c in block.constraints)
        else:
            feasible = any(
                all(satisfied(c, {**a, **ext}) for c in block.constraints)
                for ext in aux_domain.assignments()
            )
        if feasible:
            encoded.add(point)

    diff = sorted(encoded.symmetric_difference(truth))
    counterexamples = tuple(
        dict(zip(original_keys, point)) for point in diff[:max_counterexamples]
    )
    return EquivalenceReport(not diff, counterexamples, len(encoded), len(truth))
