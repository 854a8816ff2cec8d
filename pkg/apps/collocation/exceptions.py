# apps/collocation/exceptions.py
"""
Exception hierarchy shared by the numerical apps.

Every error carries a stable ``reason`` code. The management commands print
it verbatim as ``<reason>: <detail>`` and map the two families to exit codes:
argument errors exit 2, numerical failures exit 3.
"""


class BurgersError(Exception):
    """Base class for every error raised by the solver apps."""

    reason = 'error'

    def __init__(self, message=''):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return f"{self.reason}: {self.message}" if self.message else self.reason


# ============================================================================
# ARGUMENT ERRORS (caller supplied something invalid)
# ============================================================================

class BurgersArgumentError(BurgersError, ValueError):
    reason = 'invalid-argument'


class InvalidArgument(BurgersArgumentError):
    reason = 'invalid-argument'


class DimensionMismatch(BurgersArgumentError):
    reason = 'dimension-mismatch'


class DegenerateGrid(BurgersArgumentError):
    reason = 'degenerate-grid'


class GridTooSmall(BurgersArgumentError):
    reason = 'grid-too-small'


class MissingParameter(BurgersArgumentError):
    reason = 'missing-parameter'


class TimeNotSampled(BurgersArgumentError):
    reason = 'time-not-sampled'


class PointOutsideDomain(BurgersArgumentError):
    reason = 'point-outside-domain'


class OutputNotWritable(BurgersArgumentError):
    reason = 'output-not-writable'


# ============================================================================
# NUMERICAL FAILURES (inputs were valid, the computation broke down)
# ============================================================================

class NumericalFailure(BurgersError, ArithmeticError):
    reason = 'numerical-failure'


class SingularMatrix(NumericalFailure):
    reason = 'singular-matrix'


class ResidualTooLarge(NumericalFailure):
    reason = 'residual-too-large'


class Divergence(NumericalFailure):
    """Raised when a marched state picks up NaN or Inf entries."""

    reason = 'divergence'

    def __init__(self, step, node, magnitude):
        self.step = step
        self.node = node
        self.magnitude = magnitude
        super().__init__(
            f"non-finite state at step {step} (max-magnitude node {node}, |u|={magnitude!r})"
        )


class EigensolverFailure(NumericalFailure):
    reason = 'eigensolver-failure'


class EvaluationError(NumericalFailure):
    reason = 'evaluation-error'
