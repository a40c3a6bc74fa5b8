"""Exception classes. The class name doubles as the CLI's machine-readable error tag."""


class SsdError(Exception):
    """Base class for every error raised by this package."""

    #: process exit code used by the command-line front end
    exit_code = 3


class InvalidParams(SsdError, ValueError):
    exit_code = 2


class InvalidRadius(InvalidParams):
    pass


class InvalidN(InvalidParams):
    pass


class NonUnitVertex(InvalidParams):
    pass


class CollinearInput(SsdError, ValueError):
    pass


class NotCoplanar(SsdError, ValueError):
    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class NotConcyclic(SsdError, ValueError):
    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class DegenerateInput(SsdError, ValueError):
    pass


class AntipodalInput(SsdError, ValueError):
    pass


class DegenerateDiscriminant(SsdError, ArithmeticError):
    """The two dual circles do not meet: ``1 + <a,b> - 2 r^2`` is negative."""

    def __init__(self, message, discriminant=None, where=None):
        super().__init__(message)
        self.discriminant = discriminant
        self.where = where


class NoSigmaCandidate(SsdError):
    exit_code = 1


class NonConvex(SsdError):
    exit_code = 1


class VerificationFailed(SsdError):
    exit_code = 1

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NoClosure(SsdError):
    pass


class NoConvergence(SsdError):
    """Raised when grid refinement runs out of steps; ``best`` holds the last iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class OpenChain(SsdError):
    pass


class Overflow(SsdError):
    pass
