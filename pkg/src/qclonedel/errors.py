"""Exception types shared across the package."""


class QCloneDelError(Exception):
    """Base class for all package errors."""


class UsageError(QCloneDelError, ValueError):
    """Arguments are structurally incompatible (arity, space, index mismatch)."""


class DomainError(QCloneDelError, ValueError):
    """A numeric argument lies outside its admissible range."""


class DegenerateStateError(QCloneDelError, ValueError):
    """An operator or ket has (numerically) zero trace/norm."""


class ConstraintError(QCloneDelError, ValueError):
    """A machine parameter set violates a unitarity or realizability constraint.

    ``equation`` names the violated relation so callers (and the CLI) can
    report it verbatim.
    """

    def __init__(self, message, equation=None, residual=None):
        super().__init__(message)
        self.equation = equation
        self.residual = residual
