"""Satisfiability backend.

Formulas that are already conjunctions of disjunctions of literals pass
straight through to CNF; anything else is Tseitin-encoded.  CNFs whose
clauses all have at most two literals go to the linear-time implication
graph solver, the rest to DPLL.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from .bridge import BoolFormula, VarMap, abstract, fold_constants
from .core import Sla, aggregate
from .errors import ConstInFormula, NotTwoCnf
from .expr import And, Const, Node, Not, Or, Var, conjoin, disjoin, fold

DEFAULT_DECISION_LIMIT = 10**6


@dataclass(frozen=True)
class Cnf:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    origin: Mapping[int, str] = field(default_factory=dict)

    def __init__(self, num_vars: int, clauses: Sequence[Sequence[int]] = (), origin: Optional[Mapping[int, str]] = None):
        clauses = tuple(tuple(c) for c in clauses)
        for clause in clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > num_vars:
                    raise ValueError(f"literal {lit} outside ±1..{num_vars}")
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "clauses", clauses)
        object.__setattr__(self, "origin", dict(origin or {}))


class CnfClass(enum.Enum):
    TWO_SAT = "TWO_SAT"
    GENERAL = "GENERAL"


class SolverKind(enum.Enum):
    TWO_SAT = "TWO_SAT"
    DPLL = "DPLL"


@dataclass
class SolveStats:
    decisions: int = 0
    propagations: int = 0
    scc_count: int = 0


@dataclass(frozen=True)
class Sat:
    assignment: dict[int, bool]
    stats: SolveStats = field(default_factory=SolveStats, compare=False)


@dataclass(frozen=True)
class Unsat:
    stats: SolveStats = field(default_factory=SolveStats, compare=False)


@dataclass(frozen=True)
class Aborted:
    reason: str
    stats: SolveStats = field(default_factory=SolveStats, compare=False)


SolveResult = Union[Sat, Unsat, Aborted]


@dataclass(frozen=True)
class SolveReport:
    result: SolveResult
    solver_used: SolverKind
    clause_requirements: dict[str, bool]
    stats: SolveStats


def satisfies(cnf: Cnf, assignment: Mapping[int, bool]) -> bool:
    return all(any(assignment[abs(lit)] == (lit > 0) for lit in clause) for clause in cnf.clauses)


# -- conversion ---------------------------------------------------------------


def _split(node: Node, op: type) -> list[Node]:
    """Flatten a chain of ``op`` nodes into its operands, left to right."""
    parts: list[Node] = []
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, op):
            stack.append(n.right)  # type: ignore[attr-defined]
            stack.append(n.left)  # type: ignore[attr-defined]
        else:
            parts.append(n)
    return parts


def _literal(node: Node) -> Optional[int]:
    if isinstance(node, Var):
        return node.index
    if isinstance(node, Not) and isinstance(node.child, Var):
        return -node.child.index
    return None


def cnf_shape(formula: BoolFormula) -> Optional[list[tuple[int, ...]]]:
    """The formula's clauses if it is syntactically a CNF, else None."""
    clauses = []
    for conjunct in _split(formula.root, And):
        lits = [_literal(n) for n in _split(conjunct, Or)]
        if any(lit is None for lit in lits):
            return None
        clauses.append(tuple(lits))
    return clauses  # type: ignore[return-value]


def to_cnf(formula: BoolFormula, var_map: Optional[VarMap] = None) -> Cnf:
    if formula.has_consts():
        raise ConstInFormula("fold constants before converting to CNF")
    origin: dict[int, str] = dict(var_map or {})
    direct = cnf_shape(formula)
    if direct is not None:
        return Cnf(formula.num_vars, direct, origin)

    clauses: list[tuple[int, ...]] = []
    top = formula.num_vars

    def fresh() -> int:
        nonlocal top
        top += 1
        origin[top] = f"aux{top - formula.num_vars}"
        return top

    def and_(a: int, b: int) -> int:
        x = fresh()
        clauses.extend([(-x, a), (-x, b), (x, -a, -b)])
        return x

    def or_(a: int, b: int) -> int:
        x = fresh()
        clauses.extend([(-x, a, b), (x, -a), (x, -b)])
        return x

    root = fold(formula.root, lambda n: n.index, lambda c: -c, and_, or_)  # type: ignore[attr-defined]
    clauses.append((root,))
    return Cnf(top, clauses, origin)


def cnf_to_formula(cnf: Cnf) -> BoolFormula:
    """Read a CNF back as a formula: a left-nested conjunction of disjunctions."""
    if not cnf.clauses:
        return BoolFormula(Const(True), cnf.num_vars)
    conjuncts: list[Node] = []
    for clause in cnf.clauses:
        if not clause:
            return BoolFormula(Const(False), cnf.num_vars)
        conjuncts.append(disjoin([Var(l) if l > 0 else Not(Var(-l)) for l in clause]))
    return BoolFormula(conjoin(conjuncts), cnf.num_vars)


def classify(cnf: Cnf) -> CnfClass:
    return CnfClass.TWO_SAT if all(len(c) <= 2 for c in cnf.clauses) else CnfClass.GENERAL


# -- 2SAT ---------------------------------------------------------------------


def _node(lit: int) -> int:
    return 2 * (lit - 1) if lit > 0 else 2 * (-lit - 1) + 1


def _tarjan(graph: list[list[int]]) -> tuple[list[int], int]:
    """Component id per node, numbered in reverse topological order."""
    n = len(graph)
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    count = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            else:
                w = graph[v][i - 1]
                low[v] = min(low[v], low[w])
            while i < len(graph[v]):
                w = graph[v][i]
                if index[w] == -1:
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
                i += 1
            if i < len(graph[v]):
                work.append((v, i + 1))
                work.append((graph[v][i], 0))
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = count
                    if w == v:
                        break
                count += 1
    return comp, count


def solve_2sat(cnf: Cnf) -> SolveResult:
    if classify(cnf) is not CnfClass.TWO_SAT:
        raise NotTwoCnf("solve_2sat needs clauses of at most two literals")
    stats = SolveStats()
    if any(not c for c in cnf.clauses):
        return Unsat(stats)
    graph: list[list[int]] = [[] for _ in range(2 * cnf.num_vars)]
    for clause in cnf.clauses:
        a, b = (clause[0], clause[0]) if len(clause) == 1 else clause
        graph[_node(-a)].append(_node(b))
        graph[_node(-b)].append(_node(a))
    comp, stats.scc_count = _tarjan(graph)
    assignment = {}
    for v in range(1, cnf.num_vars + 1):
        pos, neg = comp[_node(v)], comp[_node(-v)]
        if pos == neg:
            return Unsat(stats)
        # Tarjan numbers sinks first: the literal whose component comes later
        # in topological order (lower id) is the one that can be true.
        assignment[v] = pos < neg
    return Sat(assignment, stats)


# -- DPLL ---------------------------------------------------------------------


def solve_dpll(cnf: Cnf, decision_limit: int = DEFAULT_DECISION_LIMIT) -> SolveResult:
    """Unit propagation, pure-literal elimination, lowest-index-true-first branching."""
    stats = SolveStats()
    clauses: list[tuple[int, ...]] = []
    for clause in cnf.clauses:
        lits = tuple(dict.fromkeys(clause))
        if not lits:
            return Unsat(stats)
        if not any(-lit in lits for lit in lits):
            clauses.append(lits)

    occurs: dict[int, list[int]] = {}
    for ci, clause in enumerate(clauses):
        for lit in clause:
            occurs.setdefault(lit, []).append(ci)

    value: list[Optional[bool]] = [None] * (cnf.num_vars + 1)
    trail: list[int] = []

    def truth(lit: int) -> Optional[bool]:
        v = value[abs(lit)]
        return v if v is None or lit > 0 else not v

    def assign(lit: int) -> None:
        value[abs(lit)] = lit > 0
        trail.append(abs(lit))

    def propagate(queue: list[int]) -> bool:
        while queue:
            lit = queue.pop()
            for ci in occurs.get(-lit, ()):
                free = None
                n_free = 0
                for x in clauses[ci]:
                    t = truth(x)
                    if t:
                        break
                    if t is None:
                        free = x
                        n_free += 1
                else:
                    if n_free == 0:
                        return False
                    if n_free == 1:
                        assign(free)  # type: ignore[arg-type]
                        stats.propagations += 1
                        queue.append(free)  # type: ignore[arg-type]
        return True

    def open_clauses() -> list[tuple[int, ...]]:
        return [c for c in clauses if not any(truth(x) for x in c)]

    def eliminate_pure() -> bool:
        while True:
            polarity: dict[int, int] = {}
            for clause in open_clauses():
                for x in clause:
                    if truth(x) is None:
                        polarity[abs(x)] = polarity.get(abs(x), 0) | (1 if x > 0 else 2)
            pure = [v if p == 1 else -v for v, p in sorted(polarity.items()) if p != 3]
            if not pure:
                return True
            for lit in pure:
                assign(lit)
                stats.propagations += 1
            if not propagate(pure):
                return False

    def undo(to: int) -> None:
        while len(trail) > to:
            value[trail.pop()] = None

    units = []
    for clause in clauses:
        if len(clause) == 1:
            lit = clause[0]
            if truth(lit) is False:
                return Unsat(stats)
            if truth(lit) is None:
                assign(lit)
                stats.propagations += 1
                units.append(lit)
    ok = propagate(units)

    decisions: list[tuple[int, int, bool]] = []
    while True:
        if ok:
            ok = eliminate_pure()
        if not ok:
            while decisions:
                mark, var, flipped = decisions.pop()
                undo(mark)
                if not flipped:
                    decisions.append((mark, var, True))
                    assign(-var)
                    ok = propagate([-var])
                    break
            else:
                return Unsat(stats)
            continue

        remaining = open_clauses()
        if not remaining:
            return Sat({v: bool(value[v]) for v in range(1, cnf.num_vars + 1)}, stats)
        if stats.decisions >= decision_limit:
            return Aborted("DecisionLimit", stats)
        var = min(abs(x) for c in remaining for x in c if truth(x) is None)
        stats.decisions += 1
        decisions.append((len(trail), var, False))
        assign(var)
        ok = propagate([var])


# -- pipeline -----------------------------------------------------------------


@dataclass(frozen=True)
class SolverConfig:
    decision_limit: int = DEFAULT_DECISION_LIMIT
    aggregate_name: str = "aggregate"


def solve_cnf(cnf: Cnf, config: SolverConfig = SolverConfig()) -> tuple[SolveResult, SolverKind]:
    if classify(cnf) is CnfClass.TWO_SAT:
        return solve_2sat(cnf), SolverKind.TWO_SAT
    return solve_dpll(cnf, config.decision_limit), SolverKind.DPLL


def solve_slas(slas: list[Sla], config: SolverConfig = SolverConfig()) -> SolveReport:
    """Is there a combination of clause outcomes satisfying all SLAs at once?"""
    combined = aggregate(slas, config.aggregate_name)
    formula, var_map = abstract(combined)
    formula = fold_constants(formula)
    if isinstance(formula.root, Const):
        cnf = Cnf(formula.num_vars, [] if formula.root.value else [()], var_map)
    else:
        cnf = to_cnf(formula, var_map)
    result, used = solve_cnf(cnf, config)
    requirements = {}
    if isinstance(result, Sat):
        requirements = {cid: result.assignment[v] for v, cid in var_map.items()}
    return SolveReport(result, used, requirements, result.stats)


__all__ = [
    "Aborted",
    "Cnf",
    "CnfClass",
    "DEFAULT_DECISION_LIMIT",
    "Sat",
    "SolveReport",
    "SolveResult",
    "SolveStats",
    "SolverConfig",
    "SolverKind",
    "Unsat",
    "classify",
    "cnf_shape",
    "cnf_to_formula",
    "satisfies",
    "solve_2sat",
    "solve_cnf",
    "solve_dpll",
    "solve_slas",
    "to_cnf",
]
