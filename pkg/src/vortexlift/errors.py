"""Exception hierarchy.

Validation problems derive from ``ValueError`` and numerical failures from
``RuntimeError`` so callers that only know the builtins still catch them.
"""


class VortexLiftError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(VortexLiftError, ValueError):
    pass


class FrequencyCollapseError(InvalidArgumentError):
    """Raised when the interaction makes a modified squared frequency non-positive."""

    def __init__(self, axis, radicand):
        self.axis = axis
        self.radicand = radicand
        name = "xyz"[axis]
        super().__init__(
            f"frequency collapse on axis {name}: "
            f"omega_{name}^2 = tilde_omega_{name}^2 - N*Omega^2 = {radicand:.6g} <= 0"
        )


class BoxTooSmallError(InvalidArgumentError):
    pass


class NumericError(VortexLiftError, RuntimeError):
    pass


class IllConditionedLoopError(NumericError):
    pass


class IndeterminateRatioError(NumericError):
    pass
