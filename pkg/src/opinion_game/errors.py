"""Exception hierarchy shared by the library and the CLI."""


class OpinionGameError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(OpinionGameError, ValueError):
    """Malformed or empty network file."""


class ValidationError(OpinionGameError, ValueError):
    """Model parameters outside their admissible range."""


class ConvergenceError(OpinionGameError, RuntimeError):
    """Fixed-point iteration did not settle within the iteration cap."""


class NumericalError(OpinionGameError, ArithmeticError):
    """A factorization or solve produced an unusable result."""


class UnsupportedInstanceError(OpinionGameError, ValueError):
    """Instance violates the assumptions under which the game is solvable."""


class SaddlePointError(OpinionGameError, ArithmeticError):
    """No budget split satisfying the saddle conditions could be found."""


class ScenarioError(OpinionGameError, ValueError):
    """Invalid experiment scenario."""
