"""Exception types shared across the knowledge-base engine."""

from __future__ import annotations


class KbError(Exception):
    """Base class for every error raised by this package."""


class MalformedTerm(KbError):
    """A term violates its structural rules (empty text, whitespace in an IRI, ...)."""


class StaleOverlay(KbError):
    """An overlay was read after its base store mutated."""


class StoreFrozen(KbError):
    """A mutation was attempted on a store that is read-only."""


class ParseError(KbError):
    """Syntax error in an input file, with a 1-based source position.

    ``column`` is 0 when only the line is known (rule files are line-oriented).
    """

    def __init__(self, message: str, line: int, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        position = f"line {line}" if column == 0 else f"line {line}, column {column}"
        super().__init__(f"{position}: {message}")


class UnknownPrefix(ParseError):
    """A prefixed name used a label that no @prefix/PREFIX directive declared."""

    def __init__(self, label: str, line: int, column: int = 0):
        self.label = label
        super().__init__(f"unknown prefix {label!r}", line, column)


class UnsafeRule(ParseError):
    """A rule head mentions a variable that never occurs in the body."""

    def __init__(self, variable: str, line: int):
        self.variable = variable
        super().__init__(f"head variable ?{variable} does not occur in the body", line)


class UnboundVariable(ParseError):
    """A projected, ordered, or filtered variable never occurs in the query patterns."""

    def __init__(self, variable: str, line: int = 1, column: int = 0):
        self.variable = variable
        super().__init__(f"variable ?{variable} does not occur in any pattern", line, column)


class ResourceLimit(KbError):
    """Saturation derived more statements than the configured cap allows."""


class NotFound(KbError):
    """The requested statement is not present in the store."""


class SchemaViolationError(KbError):
    """One or more statements violate the declared schema.

    ``violations`` holds one human-readable line per offending statement.
    """

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__(
            f"{len(violations)} schema violation(s):\n" + "\n".join(violations)
        )


class CycleError(KbError):
    """The subclass hierarchy contains a cycle."""


class DuplicateConcern(KbError):
    """Two registry entries share the same concern id."""


class UnknownConcern(KbError):
    """The requested concern id is not registered."""


class MissingParameter(KbError):
    """A concern was invoked with the wrong practice-parameter arity."""


class InvalidProfile(KbError):
    """A team profile referenced unknown goals, factors, or factor values.

    ``details`` lists one message per offending item.
    """

    def __init__(self, details: list[str]):
        self.details = details
        super().__init__("invalid profile: " + "; ".join(details))
