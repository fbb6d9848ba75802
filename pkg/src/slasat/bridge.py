"""Translations between SLAs and propositional formulas.

* ``abstract`` replaces each clause with a free variable.
* ``ground`` replaces each clause with the constant it evaluates to under a
  binding, so evaluating the result reproduces the compliance verdict.
* ``lift`` turns a formula into an SLA of symbolic clauses, one per variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .core import Clause, Sla
from .errors import ConstInFormula, UnassignedVariable
from .expr import And, ClauseRef, Const, Node, Not, Or, Var, fold, iter_leaves, map_leaves
from .verifier import Binding, clause_verdicts

# variable index -> clause id
VarMap = dict[int, str]
Assignment = Mapping[int, bool]


@dataclass(frozen=True)
class BoolFormula:
    root: Node
    num_vars: int

    def __post_init__(self) -> None:
        for leaf in iter_leaves(self.root):
            if isinstance(leaf, Var):
                if not 1 <= leaf.index <= self.num_vars:
                    raise ValueError(f"variable {leaf.index} outside 1..{self.num_vars}")
            elif not isinstance(leaf, Const):
                raise TypeError(f"formulas contain only Var and Const leaves, found {leaf!r}")

    @classmethod
    def of(cls, root: Node) -> "BoolFormula":
        """Wrap ``root``, sizing the variable range by its largest index."""
        indices = [leaf.index for leaf in iter_leaves(root) if isinstance(leaf, Var)]
        return cls(root, max(indices, default=0))

    def has_consts(self) -> bool:
        return any(isinstance(leaf, Const) for leaf in iter_leaves(self.root))


def abstract(sla: Sla) -> tuple[BoolFormula, VarMap]:
    """Variables are numbered by clause definition order; repeated refs share one."""
    index = {c.id: i for i, c in enumerate(sla.clauses, start=1)}
    root = map_leaves(sla.expression, lambda leaf: Var(index[leaf.id]))  # type: ignore[attr-defined]
    return BoolFormula(root, len(index)), {i: cid for cid, i in index.items()}


def ground(sla: Sla, binding: Binding) -> BoolFormula:
    verdicts = clause_verdicts(sla, binding)
    root = map_leaves(sla.expression, lambda leaf: Const(verdicts[leaf.id]))  # type: ignore[attr-defined]
    return BoolFormula(root, 0)


def lift(formula: BoolFormula, name: str = "lifted") -> tuple[Sla, VarMap]:
    if formula.has_consts():
        raise ConstInFormula("only variable formulas can be lifted; fold constants first")
    var_map = {i: f"v{i}" for i in range(1, formula.num_vars + 1)}
    clauses = [Clause.symbolic_term(cid) for cid in var_map.values()]
    root = map_leaves(formula.root, lambda leaf: ClauseRef(var_map[leaf.index]))  # type: ignore[attr-defined]
    return Sla(name, clauses, root), var_map


def eval_formula(formula: BoolFormula, assignment: Assignment) -> bool:
    def leaf(n: Node) -> bool:
        if isinstance(n, Const):
            return n.value
        try:
            return bool(assignment[n.index])  # type: ignore[attr-defined]
        except KeyError:
            raise UnassignedVariable(f"variable {n.index} has no value") from None  # type: ignore[attr-defined]

    return fold(formula.root, leaf, lambda c: not c, lambda a, b: a and b, lambda a, b: a or b)


def fold_constants(formula: BoolFormula) -> BoolFormula:
    """Simplify away Const nodes; the result is Const-only or Const-free."""

    def not_(c: Node) -> Node:
        return Const(not c.value) if isinstance(c, Const) else Not(c)

    def and_(a: Node, b: Node) -> Node:
        for x, y in ((a, b), (b, a)):
            if isinstance(x, Const):
                return y if x.value else Const(False)
        return And(a, b)

    def or_(a: Node, b: Node) -> Node:
        for x, y in ((a, b), (b, a)):
            if isinstance(x, Const):
                return Const(True) if x.value else y
        return Or(a, b)

    return BoolFormula(fold(formula.root, lambda n: n, not_, and_, or_), formula.num_vars)


def isomorphic(a: BoolFormula, b: BoolFormula, mapping: Mapping[int, int] | None = None) -> bool:
    """Same tree shape, with variables related by ``mapping`` (identity by default)."""
    stack = [(a.root, b.root)]
    while stack:
        x, y = stack.pop()
        if type(x) is not type(y):
            return False
        if isinstance(x, Var):
            if (mapping[x.index] if mapping else x.index) != y.index:  # type: ignore[attr-defined]
                return False
        elif isinstance(x, Const):
            if x.value != y.value:  # type: ignore[attr-defined]
                return False
        elif isinstance(x, Not):
            stack.append((x.child, y.child))  # type: ignore[attr-defined]
        else:
            stack.append((x.left, y.left))  # type: ignore[attr-defined]
            stack.append((x.right, y.right))  # type: ignore[attr-defined]
    return True


__all__ = [
    "Assignment",
    "BoolFormula",
    "VarMap",
    "abstract",
    "eval_formula",
    "fold_constants",
    "ground",
    "isomorphic",
    "lift",
]
