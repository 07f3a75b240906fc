"""MILP modelling toolkit: ontology-grounded models, building-block
constraints, typology classification, tree-guided elicitation, and a
brute-force verification oracle."""

from .model import (
    Assignment,
    Constraint,
    IndexSet,
    LinearExpr,
    Model,
    NumberType,
    Objective,
    ProblemSense,
    Sense,
    Term,
    ValidationReport,
    Variable,
    canonicalize,
    evaluate,
    objective_value,
    rat,
    satisfied,
    validate,
)

__all__ = [
    "Assignment", "Constraint", "IndexSet", "LinearExpr", "Model",
    "NumberType", "Objective", "ProblemSense", "Sense", "Term",
    "ValidationReport", "Variable", "canonicalize", "evaluate",
    "objective_value", "rat", "satisfied", "validate",
]

__version__ = "0.1.0"
