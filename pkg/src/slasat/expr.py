"""Boolean expression trees.

SLA terms and propositional formulas share the same operator nodes
(``Not``, ``And``, ``Or``); they differ only in their leaves.  An SLA
expression has ``ClauseRef`` leaves, a formula has ``Var`` and ``Const``
leaves.

All traversals here are iterative: aggregated SLAs produce left-leaning
conjunction chains thousands of nodes deep, well past Python's default
recursion limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, TypeVar, Union

T = TypeVar("T")


class Node:
    __slots__ = ()

    def __and__(self, other: "Node") -> "And":
        return And(self, other)

    def __or__(self, other: "Node") -> "Or":
        return Or(self, other)

    def __invert__(self) -> "Not":
        return Not(self)


@dataclass(frozen=True)
class ClauseRef(Node):
    id: str


@dataclass(frozen=True)
class Var(Node):
    index: int


@dataclass(frozen=True)
class Const(Node):
    value: bool


@dataclass(frozen=True)
class Not(Node):
    child: Node


@dataclass(frozen=True)
class And(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Or(Node):
    left: Node
    right: Node


Leaf = Union[ClauseRef, Var, Const]


def fold(
    node: Node,
    leaf: Callable[[Node], T],
    not_: Callable[[T], T],
    and_: Callable[[T, T], T],
    or_: Callable[[T, T], T],
) -> T:
    """Post-order fold; leaves are visited left to right."""
    stack: list[tuple[Node, bool]] = [(node, False)]
    out: list[T] = []
    while stack:
        n, expanded = stack.pop()
        if isinstance(n, Not):
            if expanded:
                out.append(not_(out.pop()))
            else:
                stack.append((n, True))
                stack.append((n.child, False))
        elif isinstance(n, (And, Or)):
            if expanded:
                right = out.pop()
                left = out.pop()
                out.append(and_(left, right) if isinstance(n, And) else or_(left, right))
            else:
                stack.append((n, True))
                stack.append((n.right, False))
                stack.append((n.left, False))
        elif isinstance(n, (ClauseRef, Var, Const)):
            out.append(leaf(n))
        else:
            raise TypeError(f"not an expression node: {n!r}")
    return out[0]


def iter_leaves(node: Node) -> Iterator[Node]:
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Not):
            stack.append(n.child)
        elif isinstance(n, (And, Or)):
            stack.append(n.right)
            stack.append(n.left)
        else:
            yield n


def map_leaves(node: Node, fn: Callable[[Node], Node]) -> Node:
    """Rebuild ``node`` with every leaf replaced by ``fn(leaf)``."""
    return fold(node, fn, Not, And, Or)


def size(node: Node) -> int:
    return fold(node, lambda _: 1, lambda c: c + 1, lambda a, b: a + b + 1, lambda a, b: a + b + 1)


def depth(node: Node) -> int:
    return fold(
        node,
        lambda _: 1,
        lambda c: c + 1,
        lambda a, b: max(a, b) + 1,
        lambda a, b: max(a, b) + 1,
    )


def conjoin(parts: list[Node]) -> Node:
    """Left-associated conjunction of a non-empty list."""
    result = parts[0]
    for part in parts[1:]:
        result = And(result, part)
    return result


def disjoin(parts: list[Node]) -> Node:
    result = parts[0]
    for part in parts[1:]:
        result = Or(result, part)
    return result


def tokens(node: Node) -> list[str]:
    """Flatten to an operator/operand token list, parenthesizing every binary node."""

    def leaf(n: Node) -> list[str]:
        if isinstance(n, ClauseRef):
            return [n.id]
        if isinstance(n, Var):
            return [f"v{n.index}"]
        return ["true" if n.value else "false"]  # type: ignore[attr-defined]

    return fold(
        node,
        leaf,
        lambda c: ["¬", *c],
        lambda a, b: ["(", *a, "∧", *b, ")"],
        lambda a, b: ["(", *a, "∨", *b, ")"],
    )
