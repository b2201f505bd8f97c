"""Exception types that map onto CLI exit codes."""


class SearchExhausted(RuntimeError):
    """A bounded search finished without a result (exit code 2)."""


class InvariantViolation(AssertionError):
    """An internal consistency check failed (exit code 3)."""
