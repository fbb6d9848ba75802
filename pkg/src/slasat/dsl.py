"""Text formats: SLA documents, metric trace CSV, and DIMACS CNF.

SLA document grammar (whitespace-insensitive, ``#`` starts a comment)::

    document := "sla" STRING "{" "clauses" "{" clause+ "}" "terms" ":" expr ";" "}"
    clause   := IDENT ":" "indicator" "(" kind "," STRING ["," STRING] ")"
                "objective" "(" objset ")" "evaluator" "(" evkind ")"
                "penalty" "(" penspec ")" ";"
              | IDENT ":" "symbolic" ";"
    kind     := "bool" | "int"
    objset   := "set" "(" literal ("," literal)* ")" | "range" "(" INT "," INT ")"
    evkind   := "membership" | "range" | "at_least" | "at_most"
    penspec  := "none" | "constant" "(" INT ")" | "linear" "(" INT ")"
              | "step" "(" INT "," INT ")"
    expr     := and ("OR" and)*
    and      := unary ("AND" unary)*
    unary    := "NOT" unary | "(" expr ")" | IDENT
    literal  := "true" | "false" | INT

The optional third ``indicator`` argument is a free-text description; the
``symbolic`` form carries free boolean terms produced by lifting formulas.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from typing import Iterator, Optional

from .core import (
    BoolSet,
    Clause,
    Constant,
    EvaluatorKind,
    IndicatorSpec,
    IndicatorValue,
    IntRange,
    IntSet,
    Linear,
    NoPenalty,
    ObjectiveSet,
    PenaltySpec,
    Sla,
    Step,
    ValueKind,
    errors_of,
    validate_sla,
    value_kind_of,
)
from .errors import DuplicateSample, LiteralOutOfRange, ParseError, SourceSpan
from .solver import Cnf
from .verifier import MetricTrace
from .expr import And, ClauseRef, Node, Not, Or, fold

# -- lexer --------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<int>-?[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_.\-]*)
  | (?P<punct>[{}():;,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "string" | "int" | "ident" | "punct" | "eof"
    text: str
    span: SourceSpan

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(line, pos - line_start + 1, 1)
            raise ParseError(span, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, SourceSpan(line, pos - line_start + 1, len(chunk))))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", _end_span(text)))
    return tokens


def _end_span(text: str) -> SourceSpan:
    lines = text.split("\n")
    return SourceSpan(len(lines), len(lines[-1]) + 1, 0)


def _unquote(token: Token) -> str:
    return re.sub(r"\\(.)", r"\1", token.text[1:-1])


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


# -- parser -------------------------------------------------------------------

_EVALUATORS = {e.value: e for e in EvaluatorKind}
_KINDS = {k.value: k for k in ValueKind}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.clause_spans: dict[str, SourceSpan] = {}
        self.ref_spans: dict[str, SourceSpan] = {}

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, expected: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(tok.span, f"unexpected {tok.describe()}", expected)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "ident") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.fail(repr(text))
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            raise self.fail(what)
        return self.advance()

    def choice(self, options: dict, what: str):
        tok = self.tok
        if tok.kind != "ident" or tok.text not in options:
            raise self.fail(what)
        self.advance()
        return options[tok.text]

    def integer(self) -> int:
        return int(self.expect_kind("int", "an integer").text)

    # document structure

    def document(self) -> Sla:
        self.expect("sla")
        name = _unquote(self.expect_kind("string", "a quoted SLA name"))
        self.expect("{")
        self.expect("clauses")
        self.expect("{")
        clauses = [self.clause()]
        while not self.at("}"):
            clauses.append(self.clause())
        self.expect("}")
        self.expect("terms")
        self.expect(":")
        expression = self.expr()
        self.expect(";")
        self.expect("}")
        if self.tok.kind != "eof":
            raise self.fail("end of input")
        return Sla(name, clauses, expression)

    def clause(self) -> Clause:
        id_tok = self.expect_kind("ident", "a clause identifier")
        self.expect(":")
        self.clause_spans.setdefault(id_tok.text, id_tok.span)
        if self.at("symbolic"):
            self.advance()
            self.expect(";")
            return Clause.symbolic_term(id_tok.text)

        self.expect("indicator")
        self.expect("(")
        kind = self.choice(_KINDS, "one of bool|int")
        self.expect(",")
        metric = _unquote(self.expect_kind("string", "a quoted metric name"))
        description = None
        if self.at(","):
            self.advance()
            description = _unquote(self.expect_kind("string", "a quoted description"))
        self.expect(")")

        self.expect("objective")
        self.expect("(")
        objective = self.objective()
        self.expect(")")

        self.expect("evaluator")
        self.expect("(")
        evaluator = self.choice(_EVALUATORS, "one of membership|range|at_least|at_most")
        self.expect(")")

        self.expect("penalty")
        self.expect("(")
        penalty = self.penalty()
        self.expect(")")
        self.expect(";")
        return Clause(id_tok.text, IndicatorSpec(metric, kind, description), objective, evaluator, penalty)

    def objective(self) -> ObjectiveSet:
        if self.at("range"):
            self.advance()
            self.expect("(")
            lo = self.integer()
            self.expect(",")
            hi = self.integer()
            self.expect(")")
            return IntRange(lo, hi)
        if not self.at("set"):
            raise self.fail("one of set|range")
        self.advance()
        self.expect("(")
        values = [self.literal()]
        while self.at(","):
            self.advance()
            tok = self.tok
            value = self.literal()
            if isinstance(value, bool) != isinstance(values[0], bool):
                raise ParseError(tok.span, "set mixes truth values and integers", None)
            values.append(value)
        self.expect(")")
        if isinstance(values[0], bool):
            return BoolSet(values)
        return IntSet(values)

    def literal(self) -> IndicatorValue:
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return int(tok.text)
        if tok.kind == "ident" and tok.text in ("true", "false"):
            self.advance()
            return tok.text == "true"
        raise self.fail("one of true|false|INT")

    def penalty(self) -> PenaltySpec:
        tok = self.tok
        if self.at("none"):
            self.advance()
            return NoPenalty()
        if self.at("constant") or self.at("linear"):
            self.advance()
            self.expect("(")
            n = self.integer()
            self.expect(")")
            return Constant(n) if tok.text == "constant" else Linear(n)
        if self.at("step"):
            self.advance()
            self.expect("(")
            threshold = self.integer()
            self.expect(",")
            amount = self.integer()
            self.expect(")")
            return Step(threshold, amount)
        raise self.fail("one of none|constant|linear|step")

    # expressions: NOT > AND > OR, binary operators left-associative

    def expr(self) -> Node:
        node = self.conj()
        while self.at("OR"):
            self.advance()
            node = Or(node, self.conj())
        return node

    def conj(self) -> Node:
        node = self.unary()
        while self.at("AND"):
            self.advance()
            node = And(node, self.unary())
        return node

    def unary(self) -> Node:
        nots = 0
        while self.at("NOT"):
            self.advance()
            nots += 1
        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")")
        elif self.tok.kind == "ident" and self.tok.text not in ("AND", "OR"):
            tok = self.advance()
            self.ref_spans.setdefault(tok.text, tok.span)
            node = ClauseRef(tok.text)
        else:
            raise self.fail("a clause identifier, NOT or '('")
        for _ in range(nots):
            node = Not(node)
        return node


def parse_sla(text: str) -> Sla:
    """Parse an SLA document; validation errors are raised as ParseError."""
    parser = _Parser(text)
    sla = parser.document()
    errs = errors_of(validate_sla(sla))
    if errs:
        first = errs[0]
        span = _end_span(text)
        if first.location:
            where, _, ident = first.location.partition(":")
            spans = parser.clause_spans if where == "clause" else parser.ref_spans
            span = spans.get(ident, span)
        raise ParseError(span, f"{first.code}: {first.message}")
    return sla


# -- serializer ---------------------------------------------------------------


def _fmt_literal(v: IndicatorValue) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _fmt_objective(obj: ObjectiveSet) -> str:
    if isinstance(obj, IntRange):
        return f"range({obj.lo},{obj.hi})"
    return "set(" + ", ".join(_fmt_literal(v) for v in sorted(obj.values)) + ")"


def _fmt_penalty(p: Optional[PenaltySpec]) -> str:
    if p is None or isinstance(p, NoPenalty):
        return "none"
    if isinstance(p, Constant):
        return f"constant({p.amount})"
    if isinstance(p, Linear):
        return f"linear({p.rate})"
    return f"step({p.threshold},{p.amount})"


_PREC = {"or": 1, "and": 2, "unary": 3}


def format_expression(node: Node) -> str:
    """Render an expression with the minimal parentheses that re-parse to the same tree."""

    def leaf(n: Node) -> tuple[str, int]:
        if not isinstance(n, ClauseRef):
            raise TypeError(f"SLA expressions only contain clause references, found {n!r}")
        return n.id, _PREC["unary"]

    def wrap(part: tuple[str, int], min_prec: int) -> str:
        text, prec = part
        return text if prec >= min_prec else f"({text})"

    return fold(
        node,
        leaf,
        lambda c: ("NOT " + wrap(c, _PREC["unary"]), _PREC["unary"]),
        lambda a, b: (wrap(a, _PREC["and"]) + " AND " + wrap(b, _PREC["unary"]), _PREC["and"]),
        lambda a, b: (wrap(a, _PREC["or"]) + " OR " + wrap(b, _PREC["and"]), _PREC["or"]),
    )[0]


def serialize_sla(sla: Sla) -> str:
    lines = [f"sla {_quote(sla.name)} {{", "  clauses {"]
    for c in sla.clauses:
        if c.symbolic:
            lines.append(f"    {c.id}: symbolic;")
            continue
        assert c.indicator is not None and c.objective is not None and c.evaluator is not None
        ind = f"{c.indicator.value_kind.value}, {_quote(c.indicator.metric_name)}"
        if c.indicator.description is not None:
            ind += f", {_quote(c.indicator.description)}"
        lines.append(
            f"    {c.id}: indicator({ind}) objective({_fmt_objective(c.objective)}) "
            f"evaluator({c.evaluator.value}) penalty({_fmt_penalty(c.penalty)});"
        )
    lines.append("  }")
    lines.append(f"  terms: {format_expression(sla.expression)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- metric traces ------------------------------------------------------------


TRACE_HEADER = ["t", "indicator", "value"]


def _parse_value(raw: str) -> Optional[IndicatorValue]:
    if raw == "true":
        return True
    if raw == "false":
        return False
    try:
        return int(raw)
    except ValueError:
        return None


def parse_trace(text: str) -> MetricTrace:
    lines = text.split("\n")
    reader = csv.reader(io.StringIO(text))
    seen: dict[tuple[int, str], int] = {}
    kinds: dict[str, ValueKind] = {}
    rows: list[tuple[int, str, IndicatorValue]] = []

    def span(lineno: int) -> SourceSpan:
        return SourceSpan(lineno, 1, len(lines[lineno - 1]) if lineno <= len(lines) else 0)

    header = next(reader, None)
    if header is None or [h.strip() for h in header] != TRACE_HEADER:
        raise ParseError(span(1), "missing trace header", "t,indicator,value")
    for row in reader:
        lineno = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise ParseError(span(lineno), f"expected 3 fields, found {len(row)}")
        t_raw, name, v_raw = (cell.strip() for cell in row)
        if not re.fullmatch(r"[0-9]+", t_raw):
            raise ParseError(span(lineno), f"timestamp {t_raw!r} is not a non-negative integer")
        if not name:
            raise ParseError(span(lineno), "empty indicator name")
        value = _parse_value(v_raw)
        if value is None:
            raise ParseError(span(lineno), f"value {v_raw!r} is neither a truth value nor an integer", "true|false|INT")
        t = int(t_raw)
        if (t, name) in seen:
            raise DuplicateSample(span(lineno), f"duplicate sample for {name!r} at t={t} (first on line {seen[(t, name)]})")
        seen[(t, name)] = lineno
        kind = value_kind_of(value)
        if kinds.setdefault(name, kind) is not kind:
            raise ParseError(span(lineno), f"indicator {name!r} mixes bool and int samples")
        rows.append((t, name, value))
    return MetricTrace.from_samples(rows)


def serialize_trace(trace: MetricTrace) -> str:
    rows = sorted((t, name, v) for name, series in trace.samples.items() for t, v in series)
    out = [",".join(TRACE_HEADER)]
    out += [f"{t},{name},{_fmt_literal(v)}" for t, name, v in rows]
    return "\n".join(out) + "\n"


# -- DIMACS -------------------------------------------------------------------


def export_dimacs(cnf: Cnf) -> str:
    lines = [f"c var {i} = {name}" for i, name in sorted(cnf.origin.items())]
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    lines += [" ".join([*map(str, clause), "0"]) for clause in cnf.clauses]
    return "\n".join(lines) + "\n"


_VAR_COMMENT = re.compile(r"c\s+var\s+(\d+)\s*=\s*(\S+)\s*\Z")


def _dimacs_tokens(text: str) -> Iterator[tuple[str, int, int, str]]:
    """Yield (kind, line, column, text) with kind in {"comment", "header", "lit"}."""
    for lineno, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("c"):
            yield "comment", lineno, 1, stripped
            continue
        if stripped.startswith("p"):
            yield "header", lineno, line.index("p") + 1, stripped
            continue
        for m in re.finditer(r"\S+", line):
            yield "lit", lineno, m.start() + 1, m.group()


def parse_dimacs(text: str) -> Cnf:
    num_vars: Optional[int] = None
    declared = 0
    origin: dict[int, str] = {}
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    last = _end_span(text)

    for kind, line, col, chunk in _dimacs_tokens(text):
        here = SourceSpan(line, col, len(chunk))
        if kind == "comment":
            m = _VAR_COMMENT.match(chunk)
            if m:
                origin[int(m.group(1))] = m.group(2)
            continue
        if kind == "header":
            parts = chunk.split()
            if num_vars is not None:
                raise ParseError(here, "duplicate problem line")
            if len(parts) != 4 or parts[:2] != ["p", "cnf"] or not all(p.isdigit() for p in parts[2:]):
                raise ParseError(here, f"bad problem line {chunk!r}", "p cnf <num_vars> <num_clauses>")
            num_vars, declared = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise ParseError(here, "clause before problem line", "p cnf <num_vars> <num_clauses>")
        try:
            lit = int(chunk)
        except ValueError:
            raise ParseError(here, f"bad literal {chunk!r}", "a signed integer") from None
        if lit == 0:
            clauses.append(tuple(pending))
            pending = []
        elif abs(lit) > num_vars:
            raise LiteralOutOfRange(here, f"literal {lit} outside declared range 1..{num_vars}")
        else:
            pending.append(lit)

    if num_vars is None:
        raise ParseError(last, "missing problem line", "p cnf <num_vars> <num_clauses>")
    if pending:
        raise ParseError(last, "clause is missing its 0 terminator", "0")
    if len(clauses) != declared:
        raise ParseError(last, f"header declares {declared} clauses, found {len(clauses)}")
    for index in origin:
        if not 1 <= index <= num_vars:
            raise LiteralOutOfRange(last, f"variable map names variable {index} outside 1..{num_vars}")
    return Cnf(num_vars, clauses, origin)


__all__ = [
    "MetricTrace",
    "ParseError",
    "SourceSpan",
    "export_dimacs",
    "format_expression",
    "parse_dimacs",
    "parse_sla",
    "parse_trace",
    "serialize_sla",
    "serialize_trace",
]
