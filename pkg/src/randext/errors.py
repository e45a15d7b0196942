"""Exception types shared across the toolkit."""


class RandextError(Exception):
    """Base class for all toolkit errors."""


class FieldMismatchError(RandextError, ValueError):
    """Operands belong to different fields, or are not reduced in the field."""


class UnsupportedParametersError(RandextError, ValueError):
    """Parameters fall outside what an operation supports (names the constraint)."""


class InfeasibleParametersError(RandextError, ValueError):
    """A planner inequality failed; the message names the first violated one."""


class PreprocessingRequiredError(RandextError, RuntimeError):
    """The operation needs a one-time preprocessing artifact (e.g. a primitive
    element with the factorization of q-1) that is not available."""
