"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: input errors exit 1, geometry
errors exit 2, resource errors exit 3.
"""


class SurgeryError(Exception):
    exit_code = 1


class InputError(SurgeryError, ValueError):
    """Malformed or out-of-range arguments."""

    exit_code = 1


class ValidationError(InputError):
    """An object failed its manifold validator where a valid one was required."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class PreconditionError(InputError):
    """A valid object that does not meet an operation's precondition."""


class GeometryError(SurgeryError):
    """The requested cut-and-paste cannot be realized on the given mesh."""

    exit_code = 2


class ResourceError(SurgeryError):
    exit_code = 3
