"""Exception hierarchy.

Anything deriving from :class:`PreconditionError` signals that a
mathematical hypothesis of an operation does not hold for the given input
(the CLI maps these to exit code 2).
"""


class GeninvError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(GeninvError, ValueError):
    """A mathematical precondition of an operation is violated."""


class ShapeError(PreconditionError):
    """Operand shapes do not conform."""


class RankHypothesisError(PreconditionError):
    """A full-rank or rank-preservation hypothesis does not hold."""


class InconsistentSystemError(PreconditionError):
    """The right-hand side is not in the column space of the matrix."""


class DisconnectedGraphError(PreconditionError):
    """The graph is disconnected, so resistances between components are infinite."""

    def __init__(self, message, components=None):
        super().__init__(message)
        self.components = components or []


class ConvergenceError(GeninvError, ArithmeticError):
    """An iterative kernel hit its iteration cap."""

    def __init__(self, message, iterations):
        super().__init__(message)
        self.iterations = iterations
