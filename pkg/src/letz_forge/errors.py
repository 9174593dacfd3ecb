"""Exception hierarchy shared by all pipeline stages.

Every error raised on purpose derives from LetzForgeError so the CLI can
map failures to exit code 1 while genuine bugs still surface as tracebacks.
"""

from __future__ import annotations


class LetzForgeError(Exception):
    """Base class for all expected pipeline failures."""


class ParseError(LetzForgeError):
    """Malformed input record; carries line number and field path."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field {field}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(f"{prefix}{message}")


class ValidationError(LetzForgeError):
    """Data violates a declared invariant."""


class ConfigError(LetzForgeError):
    """Configuration file or flag value is invalid."""


class GenerationError(LetzForgeError):
    """Sample generation could not complete (e.g. resampling exhausted)."""


class SchemaError(ParseError):
    """Serialized dataset record violates the on-disk schema."""


class ScorerError(LetzForgeError):
    """Base class for entailment-scorer failures."""


class ScorerTransportError(ScorerError):
    """Remote scorer unreachable: connection failure or timeout."""


class ScorerProtocolError(ScorerError):
    """Remote scorer reachable but the response violates the wire contract."""


class ScoringError(ScorerError):
    """A score-matrix entry could not be computed; names the offending cell."""

    def __init__(self, message: str, example_index: int, label: str | None = None):
        self.example_index = example_index
        self.label = label
        detail = f"example {example_index}"
        if label is not None:
            detail += f", label {label!r}"
        super().__init__(f"{message} ({detail})")
