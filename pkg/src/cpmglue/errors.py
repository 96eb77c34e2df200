"""Exception hierarchy shared by all cpmglue modules."""


class GluingError(Exception):
    """Base class for every error raised by cpmglue."""


class InvalidInput(GluingError, ValueError):
    pass


class NotCompletelyPositive(GluingError):
    pass


class NotSameChannel(GluingError):
    pass


class NotSubspacePreserving(GluingError):
    pass


class InvalidSpTriple(GluingError):
    """Raised by the (A, B, C) constructor; ``condition`` names the violated check."""

    def __init__(self, condition, message=None):
        self.condition = condition
        super().__init__(message or f"invalid SP triple: {condition}")


class InvalidGluingMatrix(GluingError):
    def __init__(self, sigma_max, message=None):
        self.sigma_max = sigma_max
        super().__init__(message or f"gluing matrix has largest singular value {sigma_max:.12g} > 1")


class NotARepresentation(GluingError):
    pass


class NotAGluingOfThese(GluingError):
    def __init__(self, residual, message=None):
        self.residual = residual
        super().__init__(message or f"diagonal blocks differ from the given channels (residual {residual:.3e})")


class NotInGluingFamily(GluingError):
    def __init__(self, residual, message=None):
        self.residual = residual
        super().__init__(message or f"channel is not of gluing form (residual {residual:.3e})")


class InvalidLspVectors(GluingError):
    pass


class NotLsp(GluingError):
    pass


class ZeroMatrix(GluingError):
    pass


class UndefinedProbe(GluingError):
    pass
