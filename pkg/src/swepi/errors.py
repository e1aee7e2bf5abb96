"""Exception types shared across the package."""


class SwepiError(Exception):
    """Base class for all package errors."""


class InvalidParamsError(SwepiError):
    pass


class InvalidNodeError(SwepiError):
    pass


class NotAnEdgeError(SwepiError):
    pass


class DisconnectedGraphError(SwepiError):
    pass


class GenerationFailedError(SwepiError):
    """Generator exhausted its retry budget without a connected sample."""


class StaleMoveError(SwepiError):
    """A rewire move no longer matches the graph it is applied to."""


class InvalidTemperatureError(SwepiError):
    pass


class TargetsInfeasibleError(SwepiError):
    """Joint tuning plateaued without reaching both targets.

    Carries the best result found so far in ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class SeriesTooShortError(SwepiError):
    pass


class InvalidCoarseStateError(SwepiError):
    pass
