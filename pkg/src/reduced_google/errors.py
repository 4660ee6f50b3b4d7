"""Exception hierarchy shared by the library and the command line tool."""


class ReducedGoogleError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class GraphParseError(ReducedGoogleError, ValueError):
    """Malformed edge list, label table or subset file."""

    exit_code = 3

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class LabelResolutionError(GraphParseError):
    """A token could not be mapped to a node id."""


class ConvergenceError(ReducedGoogleError, RuntimeError):
    """An iterative method stopped before reaching its tolerance.

    The last iterate and its residual are kept so callers can inspect
    how far the iteration got.
    """

    exit_code = 4

    def __init__(self, message, last_iterate=None, residual=None, iterations=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual
        self.iterations = iterations


class SingularityError(ConvergenceError):
    """Leading eigenvalue of the scattering block is numerically 1."""


class DegeneracyError(ConvergenceError):
    """Left and right power iterations disagree on the leading eigenvalue."""


class ConsistencyError(ReducedGoogleError, ArithmeticError):
    """A computed matrix violates a structural identity it must satisfy."""

    exit_code = 5


class ValidationError(ReducedGoogleError):
    """Oracle comparison failed."""

    exit_code = 6


class OracleCapError(ReducedGoogleError, ValueError):
    """Graph is too large for a dense reference computation."""

    exit_code = 7
