"""Machine-readable, machine-decidable service level agreements."""

from .bridge import BoolFormula, abstract, eval_formula, fold_constants, ground, lift
from .core import (
    BoolSet,
    Clause,
    Constant,
    EvaluatorKind,
    IndicatorSpec,
    IntRange,
    IntSet,
    Linear,
    NoPenalty,
    Sla,
    Step,
    ValueKind,
    aggregate,
    apply_penalty,
    evaluate_clause,
    validate_sla,
)
from .dsl import export_dimacs, parse_dimacs, parse_sla, parse_trace, serialize_sla
from .errors import MissingIndicator, ParseError, SlaError
from .expr import And, ClauseRef, Const, Not, Or, Var
from .solver import Cnf, classify, solve_2sat, solve_dpll, solve_slas, to_cnf
from .verifier import Binding, MetricTrace, bind, verify_at, verify_window

__version__ = "0.1.0"

__all__ = [
    "abstract",
    "aggregate",
    "And",
    "apply_penalty",
    "bind",
    "Binding",
    "BoolFormula",
    "BoolSet",
    "classify",
    "Clause",
    "ClauseRef",
    "Cnf",
    "Const",
    "Constant",
    "eval_formula",
    "evaluate_clause",
    "EvaluatorKind",
    "export_dimacs",
    "fold_constants",
    "ground",
    "IndicatorSpec",
    "IntRange",
    "IntSet",
    "lift",
    "Linear",
    "MetricTrace",
    "MissingIndicator",
    "NoPenalty",
    "Not",
    "Or",
    "parse_dimacs",
    "parse_sla",
    "parse_trace",
    "ParseError",
    "serialize_sla",
    "Sla",
    "SlaError",
    "solve_2sat",
    "solve_dpll",
    "solve_slas",
    "Step",
    "to_cnf",
    "validate_sla",
    "ValueKind",
    "Var",
    "verify_at",
    "verify_window",
]
