"""SLA domain model: clauses, objectives, evaluators, penalties, aggregation.

A clause is the quadruple (indicator, objective, evaluator, penalty).  An
SLA is a named, ordered collection of clauses plus a boolean expression over
their ids.  Everything here is immutable and side-effect free.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Union

from .errors import (
    DuplicateSlaName,
    EmptyAggregate,
    InvalidSlaName,
    KindMismatch,
    SymbolicClause,
)
from .expr import And, ClauseRef, Node, Not, Or, conjoin, iter_leaves, map_leaves

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*\Z")
RESERVED_WORDS = frozenset({"AND", "OR", "NOT"})

# Python's bool is an int subclass; indicator values are either a bool or a
# non-bool int, and ``value_kind_of`` tells them apart.
IndicatorValue = Union[bool, int]


class ValueKind(enum.Enum):
    BOOLEAN = "bool"
    INTEGER = "int"


def value_kind_of(value: IndicatorValue) -> ValueKind:
    if isinstance(value, bool):
        return ValueKind.BOOLEAN
    if isinstance(value, int):
        return ValueKind.INTEGER
    raise TypeError(f"indicator values are bool or int, got {type(value).__name__}")


@dataclass(frozen=True)
class IndicatorSpec:
    metric_name: str
    value_kind: ValueKind
    description: Optional[str] = None


@dataclass(frozen=True)
class BoolSet:
    values: frozenset[bool]

    def __init__(self, values: Iterable[bool]):
        object.__setattr__(self, "values", frozenset(values))


@dataclass(frozen=True)
class IntSet:
    values: frozenset[int]

    def __init__(self, values: Iterable[int]):
        object.__setattr__(self, "values", frozenset(values))


@dataclass(frozen=True)
class IntRange:
    lo: int
    hi: int


ObjectiveSet = Union[BoolSet, IntSet, IntRange]


class EvaluatorKind(enum.Enum):
    MEMBERSHIP = "membership"
    RANGE = "range"
    AT_LEAST = "at_least"
    AT_MOST = "at_most"


@dataclass(frozen=True)
class NoPenalty:
    pass


@dataclass(frozen=True)
class Constant:
    amount: int


@dataclass(frozen=True)
class Linear:
    rate: int


@dataclass(frozen=True)
class Step:
    threshold: int
    amount: int


PenaltySpec = Union[NoPenalty, Constant, Linear, Step]


@dataclass(frozen=True)
class Clause:
    id: str
    indicator: Optional[IndicatorSpec] = None
    objective: Optional[ObjectiveSet] = None
    evaluator: Optional[EvaluatorKind] = None
    penalty: Optional[PenaltySpec] = field(default_factory=NoPenalty)
    symbolic: bool = False

    @classmethod
    def symbolic_term(cls, id: str) -> "Clause":
        """A clause with no indicator, objective or penalty: a free boolean."""
        return cls(id=id, indicator=None, objective=None, evaluator=None, penalty=None, symbolic=True)


@dataclass(frozen=True)
class Sla:
    name: str
    clauses: tuple[Clause, ...]
    expression: Node

    def __init__(self, name: str, clauses: Iterable[Clause], expression: Node):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "clauses", tuple(clauses))
        object.__setattr__(self, "expression", expression)

    def clause(self, clause_id: str) -> Clause:
        for c in self.clauses:
            if c.id == clause_id:
                return c
        raise KeyError(clause_id)

    @property
    def clause_ids(self) -> list[str]:
        return [c.id for c in self.clauses]

    @property
    def indicator_names(self) -> set[str]:
        return {c.indicator.metric_name for c in self.clauses if c.indicator is not None}


def evaluate_clause(clause: Clause, value: IndicatorValue) -> bool:
    if clause.symbolic:
        raise SymbolicClause(f"clause {clause.id!r} is symbolic and has no evaluator")
    assert clause.indicator is not None
    if value_kind_of(value) is not clause.indicator.value_kind:
        raise KindMismatch(
            f"clause {clause.id!r} expects a {clause.indicator.value_kind.value} value, got {value!r}"
        )
    objective = clause.objective
    evaluator = clause.evaluator
    if evaluator is EvaluatorKind.MEMBERSHIP and isinstance(objective, (BoolSet, IntSet)):
        return value in objective.values
    if evaluator is EvaluatorKind.RANGE and isinstance(objective, IntRange):
        return objective.lo <= value <= objective.hi
    if evaluator in (EvaluatorKind.AT_LEAST, EvaluatorKind.AT_MOST) and isinstance(objective, IntSet):
        (threshold,) = objective.values
        return value >= threshold if evaluator is EvaluatorKind.AT_LEAST else value <= threshold
    raise KindMismatch(f"clause {clause.id!r}: evaluator {evaluator} cannot use objective {objective!r}")


def apply_penalty(spec: Optional[PenaltySpec], elapsed: int) -> int:
    """Credits owed for a violation lasting ``elapsed`` time units."""
    if elapsed < 0:
        raise ValueError(f"elapsed must be non-negative, got {elapsed}")
    if spec is None or isinstance(spec, NoPenalty):
        return 0
    if isinstance(spec, Constant):
        return spec.amount if elapsed > 0 else 0
    if isinstance(spec, Linear):
        return spec.rate * elapsed
    if isinstance(spec, Step):
        return spec.amount if elapsed > 0 and elapsed >= spec.threshold else 0
    raise TypeError(f"unknown penalty spec {spec!r}")


# -- validation ---------------------------------------------------------------


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Issue:
    severity: Severity
    code: str
    message: str
    location: Optional[str] = None  # "clause:<id>", "ref:<id>" or None for the whole SLA


def _objective_issue(clause: Clause) -> Optional[str]:
    ev, obj, ind = clause.evaluator, clause.objective, clause.indicator
    if ev is None or obj is None or ind is None:
        return "non-symbolic clause needs indicator, objective and evaluator"
    if isinstance(obj, (BoolSet, IntSet)) and not obj.values:
        return "objective set is empty"
    if isinstance(obj, IntRange) and obj.lo > obj.hi:
        return f"range lower bound {obj.lo} exceeds upper bound {obj.hi}"
    if ev is EvaluatorKind.MEMBERSHIP and not isinstance(obj, (BoolSet, IntSet)):
        return "membership evaluator needs a set objective"
    if ev is EvaluatorKind.RANGE and not isinstance(obj, IntRange):
        return "range evaluator needs a range objective"
    if ev in (EvaluatorKind.AT_LEAST, EvaluatorKind.AT_MOST):
        if not isinstance(obj, IntSet) or len(obj.values) != 1:
            return f"{ev.value} evaluator needs a single-element integer set"
    return None


def _kind_issue(clause: Clause) -> Optional[str]:
    assert clause.indicator is not None
    kind = clause.indicator.value_kind
    obj = clause.objective
    if kind is ValueKind.BOOLEAN and not isinstance(obj, BoolSet):
        return "bool indicator needs a set of truth values"
    if kind is ValueKind.INTEGER and isinstance(obj, BoolSet):
        return "int indicator cannot use a set of truth values"
    return None


def _penalty_issue(penalty: Optional[PenaltySpec]) -> Optional[str]:
    if isinstance(penalty, Constant) and penalty.amount < 0:
        return "penalty amount must be non-negative"
    if isinstance(penalty, Linear) and penalty.rate < 0:
        return "penalty rate must be non-negative"
    if isinstance(penalty, Step) and (penalty.amount < 0 or penalty.threshold < 0):
        return "step threshold and amount must be non-negative"
    return None


def validate_sla(sla: Sla) -> list[Issue]:
    issues: list[Issue] = []

    def error(code: str, message: str, location: Optional[str]) -> None:
        issues.append(Issue(Severity.ERROR, code, message, location))

    seen: set[str] = set()
    metric_kinds: dict[str, ValueKind] = {}
    for clause in sla.clauses:
        loc = f"clause:{clause.id}"
        if clause.id in seen:
            error("DuplicateClauseId", f"clause id {clause.id!r} is defined more than once", loc)
        seen.add(clause.id)
        if not IDENT_RE.match(clause.id) or clause.id in RESERVED_WORDS:
            error("InvalidClauseId", f"{clause.id!r} is not a valid clause identifier", loc)
        if clause.symbolic:
            if any(x is not None for x in (clause.indicator, clause.objective, clause.evaluator, clause.penalty)):
                error("SymbolicClauseFields", f"symbolic clause {clause.id!r} must carry no fields", loc)
            continue
        problem = _objective_issue(clause)
        if problem:
            error("EvaluatorObjectiveMismatch", f"clause {clause.id!r}: {problem}", loc)
            continue
        assert clause.indicator is not None
        if not clause.indicator.metric_name:
            error("EmptyMetricName", f"clause {clause.id!r} has an empty metric name", loc)
        problem = _kind_issue(clause)
        if problem:
            error("KindMismatch", f"clause {clause.id!r}: {problem}", loc)
        name, kind = clause.indicator.metric_name, clause.indicator.value_kind
        if metric_kinds.setdefault(name, kind) is not kind:
            error("IndicatorKindConflict", f"indicator {name!r} is used with both bool and int kinds", loc)
        problem = _penalty_issue(clause.penalty)
        if problem:
            error("InvalidPenalty", f"clause {clause.id!r}: {problem}", loc)

    referenced: set[str] = set()
    for leaf in iter_leaves(sla.expression):
        if not isinstance(leaf, ClauseRef):
            error("InvalidExpression", f"SLA expressions may only reference clauses, found {leaf!r}", None)
            continue
        if leaf.id not in seen and leaf.id not in referenced:
            error("UnresolvedClauseRef", f"expression references undefined clause {leaf.id!r}", f"ref:{leaf.id}")
        referenced.add(leaf.id)

    for clause in sla.clauses:
        if clause.id not in referenced:
            issues.append(
                Issue(Severity.WARNING, "UnreferencedClause", f"clause {clause.id!r} is never referenced", f"clause:{clause.id}")
            )
    return issues


def errors_of(issues: list[Issue]) -> list[Issue]:
    return [i for i in issues if i.severity is Severity.ERROR]


# -- aggregation --------------------------------------------------------------


def aggregate(slas: list[Sla], name: str) -> Sla:
    """Conjoin several SLAs into one, prefixing clause ids with ``<sla-name>.``."""
    if not slas:
        raise EmptyAggregate("cannot aggregate an empty list of SLAs")
    names = [s.name for s in slas]
    for n in names:
        if names.count(n) > 1:
            raise DuplicateSlaName(f"SLA name {n!r} appears more than once")
        if not IDENT_RE.match(n) or n in RESERVED_WORDS:
            raise InvalidSlaName(f"SLA name {n!r} cannot prefix clause ids")

    clauses: list[Clause] = []
    parts: list[Node] = []
    for sla in slas:
        prefix = f"{sla.name}."
        for c in sla.clauses:
            clauses.append(replace(c, id=prefix + c.id))
        parts.append(
            map_leaves(sla.expression, lambda leaf, p=prefix: ClauseRef(p + leaf.id) if isinstance(leaf, ClauseRef) else leaf)
        )
    return Sla(name, clauses, conjoin(parts))


__all__ = [
    "And",
    "BoolSet",
    "Clause",
    "ClauseRef",
    "Constant",
    "EvaluatorKind",
    "IndicatorSpec",
    "IndicatorValue",
    "IntRange",
    "IntSet",
    "Issue",
    "Linear",
    "NoPenalty",
    "Not",
    "Or",
    "PenaltySpec",
    "Severity",
    "Sla",
    "Step",
    "ValueKind",
    "aggregate",
    "apply_penalty",
    "errors_of",
    "evaluate_clause",
    "validate_sla",
    "value_kind_of",
]
