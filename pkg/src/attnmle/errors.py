"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Base class for input/shape validation failures."""


class DimensionMismatchError(ValidationError):
    """Two vectors (or a vector and a sequence) disagree on dimension."""


class ZeroVectorError(ValidationError):
    """A zero vector was passed where a direction is required (cosine)."""


class NonFiniteInputError(ValidationError):
    """An input contains NaN or infinity."""


class EmptySequenceError(ValidationError):
    """An operation needs at least one key/value pair."""


class ExpOverflowError(OverflowError):
    """exp() of a scaled score would leave the positive finite double range."""


class ConvergenceWarning(RuntimeWarning):
    """The iterative optimizer stopped above its gradient tolerance.

    The final iterate is still returned; this warning is how the
    shortfall is reported rather than silently swallowed.
    """
