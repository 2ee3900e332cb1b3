"""Exception hierarchy shared by the modules and mapped to CLI exit codes."""


class EnsembleError(Exception):
    """Base class for all domain errors raised by this package."""

    exit_code = 2


class DomainError(EnsembleError, ValueError):
    """Input is outside the domain of the operation (exit code 2)."""

    exit_code = 2


class ResourceBoundError(EnsembleError):
    """A requested enumeration or evaluation exceeds a configured safety bound."""

    exit_code = 3


class ToleranceError(EnsembleError):
    """The requested tolerance cannot be met at floating precision."""

    exit_code = 4

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved
