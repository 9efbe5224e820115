from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int = 1

    def __post_init__(self):
        if self.line < 1 or self.column < 1 or self.length < 1:
            raise ValueError(f"invalid span {self.line}:{self.column}+{self.length}")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class InputError(Exception):
    """Base class for all user-facing input errors (exit code 2)."""

    def __init__(self, message: str, span: SourceSpan | None = None):
        self.message = message
        self.span = span
        super().__init__(f"{span}: {message}" if span else message)


class LexError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message: str, span: SourceSpan | None = None, expected: frozenset[str] = frozenset()):
        if expected:
            message = f"{message} (expected one of: {', '.join(sorted(expected))})"
        super().__init__(message, span)
        self.expected = expected


class NameError_(InputError):
    pass


class TypeError_(InputError):
    pass


class PositivityError(InputError):
    def __init__(self, datatype: str, constructor: str, field: str, occurrence: str, span=None):
        self.datatype = datatype
        self.constructor = constructor
        self.field = field
        self.occurrence = occurrence
        super().__init__(
            f"datatype {datatype}: constructor {constructor}, field {field}: "
            f"negative occurrence of {occurrence}",
            span,
        )


class HintError(InputError):
    pass
