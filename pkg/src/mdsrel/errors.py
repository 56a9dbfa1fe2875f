"""Exception types shared across the package.

Domain violations (negative time, a probability outside [0, 1], ...) raise
plain ValueError.  The classes here cover the failure modes callers may want
to handle separately; the CLI maps them onto exit codes.
"""


class ConfigError(ValueError):
    """Config file could not be parsed or failed validation (exit code 2)."""


class NumericError(ArithmeticError):
    """A computation could not produce a finite result (exit code 3)."""


class NonConvergenceError(NumericError):
    """An iterative search exhausted its budget (quadrature truncation,
    cumulative-hazard inversion on a bounded model, ...)."""


class SingularityError(NumericError):
    """A closed form was evaluated at a removable-looking but genuinely
    singular parameter point; the message names the vanishing factor."""


class SurvivalUnderflowError(NumericError):
    """Block survival underflowed to exact zero even in the log domain."""

    def __init__(self, x, n, t):
        self.x = x
        self.n = n
        self.t = t
        super().__init__(
            f"block survival underflowed to zero in log space at "
            f"x={x!r} hours for n={n}, t={t}"
        )


class CapacityError(RuntimeError):
    """A simulation request exceeded the configured sample budget (exit 4)."""


class EmptyCurveError(NumericError):
    """Every point of a derived curve was flagged unreliable."""
