"""Independent oracles and random instance generators for the test suite.

The oracles deliberately avoid the library's own evaluators: formulas are
evaluated by a separate recursive walk, satisfiability by enumerating every
assignment.
"""

from __future__ import annotations

import itertools
import random
from pathlib import Path

from slasat.core import (
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
)
from slasat.expr import And, ClauseRef, Const, Not, Or, Var

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


# -- oracles ------------------------------------------------------------------


def truth(node, env) -> bool:
    """Reference evaluator for small trees; ``env`` maps leaf keys to bools."""
    if isinstance(node, Var):
        return env[node.index]
    if isinstance(node, ClauseRef):
        return env[node.id]
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Not):
        return not truth(node.child, env)
    if isinstance(node, And):
        return truth(node.left, env) and truth(node.right, env)
    if isinstance(node, Or):
        return truth(node.left, env) or truth(node.right, env)
    raise TypeError(node)


def assignments(n: int):
    for bits in itertools.product((False, True), repeat=n):
        yield {i + 1: b for i, b in enumerate(bits)}


def formula_models(node, n: int) -> list[dict[int, bool]]:
    return [a for a in assignments(n) if truth(node, a)]


def cnf_models(clauses, n: int) -> list[dict[int, bool]]:
    return [a for a in assignments(n) if all(any(a[abs(l)] == (l > 0) for l in c) for c in clauses)]


def brute_satisfiable(clauses, n: int) -> bool:
    return any(True for a in assignments(n) if all(any(a[abs(l)] == (l > 0) for l in c) for c in clauses))


def clause_holds(clause: Clause, value) -> bool:
    """Clause semantics restated from scratch, for cross-checking."""
    obj = clause.objective
    if isinstance(obj, IntRange):
        return obj.lo <= value and value <= obj.hi
    if clause.evaluator is EvaluatorKind.AT_LEAST:
        return value >= min(obj.values)
    if clause.evaluator is EvaluatorKind.AT_MOST:
        return value <= max(obj.values)
    return any(value == v and type(value) is type(v) for v in obj.values)


# -- generators ---------------------------------------------------------------


def random_node(rng: random.Random, leaves, depth: int):
    """Random tree of height at most ``depth`` over the given leaf factory."""
    if depth <= 1 or rng.random() < 0.25:
        return leaves()
    pick = rng.random()
    if pick < 0.2:
        return Not(random_node(rng, leaves, depth - 1))
    op = And if pick < 0.6 else Or
    return op(random_node(rng, leaves, depth - 1), random_node(rng, leaves, depth - 1))


def random_formula(rng: random.Random, max_vars: int = 12, max_depth: int = 6):
    n = rng.randint(1, max_vars)
    root = random_node(rng, lambda: Var(rng.randint(1, n)), rng.randint(1, max_depth))
    return root, n


def random_2cnf(rng: random.Random, max_vars: int = 12):
    n = rng.randint(1, max_vars)
    m = rng.randint(1, 3 * n)

    def lit():
        return rng.choice((1, -1)) * rng.randint(1, n)

    clauses = [[lit()] if rng.random() < 0.15 else [lit(), lit()] for _ in range(m)]
    return clauses, n


def planted_2cnf(rng: random.Random, n: int, m: int):
    """2-CNF with a hidden model; every clause keeps at least one true literal."""
    hidden = {v: rng.random() < 0.5 for v in range(1, n + 1)}
    clauses = []
    while len(clauses) < m:
        a, b = (rng.choice((1, -1)) * rng.randint(1, n) for _ in range(2))
        if any(hidden[abs(l)] == (l > 0) for l in (a, b)):
            clauses.append([a, b])
    return clauses


def pigeonhole(pigeons: int, holes: int):
    """Standard PHP encoding; variable (p, h) is p * holes + h + 1."""
    var = lambda p, h: p * holes + h + 1  # noqa: E731
    clauses = [[var(p, h) for h in range(holes)] for p in range(pigeons)]
    for h in range(holes):
        for p, q in itertools.combinations(range(pigeons), 2):
            clauses.append([-var(p, h), -var(q, h)])
    return clauses, pigeons * holes


METRICS = {
    "uptime": ValueKind.BOOLEAN,
    "healthy": ValueKind.BOOLEAN,
    "latency_ms": ValueKind.INTEGER,
    "errors": ValueKind.INTEGER,
    "throughput": ValueKind.INTEGER,
}


def random_clause(rng: random.Random, cid: str, metric: str | None = None) -> Clause:
    metric = metric or rng.choice(sorted(METRICS))
    kind = METRICS[metric]
    penalty = rng.choice(
        [NoPenalty(), Constant(rng.randint(0, 50)), Linear(rng.randint(0, 5)), Step(rng.randint(0, 100), rng.randint(0, 500))]
    )
    description = rng.choice([None, None, f"{metric} monitor"])
    indicator = IndicatorSpec(metric, kind, description)
    if kind is ValueKind.BOOLEAN:
        values = rng.choice([[True], [False], [True, False]])
        return Clause(cid, indicator, BoolSet(values), EvaluatorKind.MEMBERSHIP, penalty)
    shape = rng.randrange(4)
    if shape == 0:
        lo = rng.randint(-20, 80)
        return Clause(cid, indicator, IntRange(lo, lo + rng.randint(0, 60)), EvaluatorKind.RANGE, penalty)
    if shape == 1:
        values = rng.sample(range(-10, 100), rng.randint(1, 5))
        return Clause(cid, indicator, IntSet(values), EvaluatorKind.MEMBERSHIP, penalty)
    ev = EvaluatorKind.AT_LEAST if shape == 2 else EvaluatorKind.AT_MOST
    return Clause(cid, indicator, IntSet([rng.randint(-10, 100)]), ev, penalty)


def random_sla(rng: random.Random, name: str = "s", max_clauses: int = 6, max_depth: int = 5) -> Sla:
    n = rng.randint(1, max_clauses)
    clauses = [random_clause(rng, f"c{i}") for i in range(n)]
    ids = [c.id for c in clauses]
    # reference every clause at least once, then add extra structure
    root = ClauseRef(ids[0])
    for cid in ids[1:]:
        root = rng.choice((And, Or))(root, ClauseRef(cid)) if rng.random() < 0.5 else rng.choice((And, Or))(ClauseRef(cid), root)
    extra = random_node(rng, lambda: ClauseRef(rng.choice(ids)), rng.randint(1, max_depth))
    if rng.random() < 0.5:
        root = rng.choice((And, Or))(root, extra)
    if rng.random() < 0.3:
        root = Not(root)
    return Sla(name, clauses, root)


def random_binding_values(rng: random.Random, metrics=None) -> dict:
    values = {}
    for metric in metrics or METRICS:
        if METRICS[metric] is ValueKind.BOOLEAN:
            values[metric] = rng.random() < 0.5
        else:
            values[metric] = rng.randint(-20, 120)
    return values


def witness_value(clause: Clause, want: bool):
    """An indicator value making ``clause`` evaluate to ``want``."""
    obj = clause.objective
    if isinstance(obj, BoolSet):
        candidates = [True, False]
    elif isinstance(obj, IntRange):
        candidates = [obj.lo, obj.lo - 1, obj.hi + 1]
    else:
        candidates = [v + d for v in sorted(obj.values) for d in (0, -1, 1)]
    for v in candidates:
        if clause_holds(clause, v) == want:
            return v
    return None
