"""Error taxonomy shared across the toolkit.

Three failure classes: bad inputs (InvalidArgumentError), numeric failures
such as non-converged quadrature or iteration caps (NumericFailureError), and
plain I/O errors (left to the builtin OSError). The CLI maps these to exit
codes 2 and 3 respectively.
"""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class NumericFailureError(RuntimeError):
    """A numeric routine failed to reach its documented tolerance."""
