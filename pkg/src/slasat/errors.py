"""Exception hierarchy shared by every slasat module."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence


class SlaError(Exception):
    """Base class for all library errors."""


class KindMismatch(SlaError):
    pass


class SymbolicClause(SlaError):
    pass


class EmptyAggregate(SlaError):
    pass


class DuplicateSlaName(SlaError):
    pass


class InvalidSlaName(SlaError):
    pass


class InvalidWindow(SlaError):
    pass


class ConstInFormula(SlaError):
    pass


class UnassignedVariable(SlaError):
    pass


class NotTwoCnf(SlaError):
    pass


class MissingIndicator(SlaError):
    def __init__(self, clause_ids: Sequence[str], indicators: Sequence[str] = ()):
        self.clause_ids = list(clause_ids)
        self.indicators = list(indicators)
        detail = ", ".join(self.clause_ids)
        if self.indicators:
            detail += f" (no value for {', '.join(self.indicators)})"
        super().__init__(f"MissingIndicator: {detail}")


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 0

    def __post_init__(self) -> None:
        if self.line < 1 or self.column < 1 or self.length < 0:
            raise ValueError(f"invalid span {self}")

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(SlaError):
    """Lexical or syntactic failure, located by a SourceSpan."""

    def __init__(self, span: SourceSpan, message: str, expected: Optional[str] = None):
        if not message:
            raise ValueError("ParseError needs a message")
        self.span = span
        self.message = message
        self.expected = expected
        text = f"{span}: {message}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


class DuplicateSample(ParseError):
    pass


class LiteralOutOfRange(ParseError):
    pass
