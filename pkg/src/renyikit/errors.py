"""Exception types shared across the toolkit.

The CLI maps these onto exit codes, so keep the split stable:
ValidationError for malformed inputs, DomainError for inputs that are
well-formed but mathematically out of range for an operation, and
ConvergenceError for solvers that hit their iteration budget.
"""


class ValidationError(ValueError):
    """Input fails a structural check (shape, normalization, schema)."""


class DomainError(ValueError):
    """Input is structurally fine but outside an operation's domain."""


class ConvergenceError(RuntimeError):
    """A numerical routine failed to reach its tolerance."""
