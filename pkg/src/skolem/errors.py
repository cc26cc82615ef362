"""Exception hierarchy shared by all pipeline stages."""


class SkolemError(Exception):
    """Base class; ``reason`` is a short machine-readable tag used in reports."""

    reason = "error"


class ResourceExhausted(SkolemError):
    reason = "resource_exhausted"


class NilpotencyUndetermined(SkolemError):
    reason = "nilpotency_cap_exceeded"


class ZeroDivisorUnknown(SkolemError):
    reason = "zero_divisor_unknown"


class UnsupportedDecomposition(SkolemError):
    reason = "unsupported_primary_decomposition"


class FactorizationError(SkolemError):
    reason = "factorization_budget_exceeded"


class InvalidProblem(SkolemError):
    reason = "invalid_input"


class ParseError(InvalidProblem):
    """Positioned syntax error (1-based line and column)."""

    def __init__(self, message, line=0, column=0, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        where = f"line {line}, column {column}: " if line else ""
        tail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{tail}")
