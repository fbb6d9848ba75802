"""Compliance checking of SLAs against metric traces.

``verify_at`` evaluates every clause once against a snapshot of indicator
values and then evaluates the SLA's boolean structure over those verdicts.
``verify_window`` repeats that on a fixed time grid and turns runs of failed
clause verdicts into violation intervals and penalty totals.
"""

from __future__ import annotations

from bisect import bisect_right, insort
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .core import Clause, IndicatorValue, Sla, apply_penalty, evaluate_clause, value_kind_of
from .errors import InvalidWindow, MissingIndicator, SymbolicClause
from .expr import ClauseRef, Node, fold

ClauseEvaluator = Callable[[Clause, IndicatorValue], bool]


@dataclass(frozen=True)
class MetricTrace:
    """Per-indicator samples, each series strictly increasing in timestamp."""

    samples: Mapping[str, tuple[tuple[int, IndicatorValue], ...]]

    @classmethod
    def from_samples(cls, rows: "list[tuple[int, str, IndicatorValue]]") -> "MetricTrace":
        grouped: dict[str, list[tuple[int, IndicatorValue]]] = {}
        for t, name, value in rows:
            if t < 0:
                raise ValueError(f"negative timestamp {t} for {name!r}")
            series = grouped.setdefault(name, [])
            if series and value_kind_of(series[0][1]) is not value_kind_of(value):
                raise ValueError(f"indicator {name!r} mixes bool and int samples")
            if any(s == t for s, _ in series):
                raise ValueError(f"duplicate sample for {name!r} at t={t}")
            insort(series, (t, value), key=lambda s: s[0])
        return cls({name: tuple(series) for name, series in grouped.items()})

    @property
    def indicators(self) -> list[str]:
        return sorted(self.samples)

    def extent(self) -> tuple[int, int]:
        times = [t for series in self.samples.values() for t, _ in series]
        if not times:
            raise ValueError("trace has no samples")
        return min(times), max(times)


@dataclass(frozen=True)
class Binding:
    values: Mapping[str, IndicatorValue]
    timestamp: int = 0

    def restrict(self, names: set[str]) -> "Binding":
        return Binding({k: v for k, v in self.values.items() if k in names}, self.timestamp)


@dataclass(frozen=True)
class ComplianceReport:
    sla_name: str
    timestamp: int
    verdicts: dict[str, bool]
    overall: bool
    missing_indicators: list[str] = field(default_factory=list)

    @property
    def violated(self) -> list[str]:
        return [cid for cid, ok in self.verdicts.items() if not ok]


@dataclass(frozen=True)
class ViolationInterval:
    start: int
    end: int  # timestamp of the last violating step
    elapsed: int


@dataclass(frozen=True)
class WindowReport:
    sla_name: str
    t0: int
    t1: int
    step: int
    intervals: dict[str, list[ViolationInterval]]
    penalties: dict[str, int]
    total_penalty: int
    verdicts: list[tuple[int, bool]]

    @property
    def compliant(self) -> bool:
        return all(ok for _, ok in self.verdicts)


def bind(trace: MetricTrace, t: int) -> Binding:
    """Sample-and-hold snapshot: the latest value at or before ``t`` per indicator."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    values: dict[str, IndicatorValue] = {}
    for name, series in trace.samples.items():
        i = bisect_right(series, t, key=lambda s: s[0])
        if i:
            values[name] = series[i - 1][1]
    return Binding(values, t)


def evaluate_expression(expression: Node, verdicts: Mapping[str, bool]) -> bool:
    def leaf(n: Node) -> bool:
        if not isinstance(n, ClauseRef):
            raise TypeError(f"unexpected leaf {n!r} in SLA expression")
        return verdicts[n.id]

    return fold(expression, leaf, lambda c: not c, lambda a, b: a and b, lambda a, b: a or b)


def clause_verdicts(
    sla: Sla, binding: Binding, evaluator: ClauseEvaluator = evaluate_clause
) -> dict[str, bool]:
    """Evaluate each clause exactly once, in definition order."""
    symbolic = [c.id for c in sla.clauses if c.symbolic]
    if symbolic:
        raise SymbolicClause(f"symbolic clauses cannot be verified: {', '.join(symbolic)}")
    missing = [c for c in sla.clauses if c.indicator.metric_name not in binding.values]  # type: ignore[union-attr]
    if missing:
        names = sorted({c.indicator.metric_name for c in missing})  # type: ignore[union-attr]
        raise MissingIndicator([c.id for c in missing], names)
    return {c.id: evaluator(c, binding.values[c.indicator.metric_name]) for c in sla.clauses}  # type: ignore[union-attr]


def verify_at(sla: Sla, binding: Binding, evaluator: ClauseEvaluator = evaluate_clause) -> ComplianceReport:
    """Check ``sla`` against one snapshot of indicator values.

    No short-circuiting: every clause verdict is reported even when the
    overall outcome is already decided.  ``evaluator`` can be swapped to
    instrument clause evaluations.
    """
    verdicts = clause_verdicts(sla, binding, evaluator)
    overall = evaluate_expression(sla.expression, verdicts)
    return ComplianceReport(sla.name, binding.timestamp, verdicts, overall, [])


def verify_window(sla: Sla, trace: MetricTrace, t0: int, t1: int, step: int = 1) -> WindowReport:
    if t0 > t1:
        raise InvalidWindow(f"window start {t0} is after its end {t1}")
    if step < 1:
        raise InvalidWindow(f"step must be at least 1, got {step}")
    if t0 < 0:
        raise InvalidWindow(f"window start must be non-negative, got {t0}")

    reports = [verify_at(sla, bind(trace, t)) for t in range(t0, t1 + 1, step)]

    intervals: dict[str, list[ViolationInterval]] = {}
    penalties: dict[str, int] = {}
    for clause in sla.clauses:
        runs: list[ViolationInterval] = []
        start = last = None
        for report in reports:
            if not report.verdicts[clause.id]:
                if start is None:
                    start = report.timestamp
                last = report.timestamp
            elif start is not None:
                runs.append(ViolationInterval(start, last, last - start + step))
                start = None
        if start is not None:
            runs.append(ViolationInterval(start, last, last - start + step))
        intervals[clause.id] = runs
        penalties[clause.id] = sum(apply_penalty(clause.penalty, r.elapsed) for r in runs)

    return WindowReport(
        sla_name=sla.name,
        t0=t0,
        t1=t1,
        step=step,
        intervals=intervals,
        penalties=penalties,
        total_penalty=sum(penalties.values()),
        verdicts=[(r.timestamp, r.overall) for r in reports],
    )


__all__ = [
    "Binding",
    "ComplianceReport",
    "MetricTrace",
    "ViolationInterval",
    "WindowReport",
    "bind",
    "clause_verdicts",
    "evaluate_expression",
    "verify_at",
    "verify_window",
]
