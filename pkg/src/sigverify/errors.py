"""Exception hierarchy shared by all modules.

The CLI maps these onto fixed exit codes: validation and format problems
exit with 2, I/O problems (``OSError``) with 3.
"""


class SigVerifyError(Exception):
    """Base class for toolkit errors."""


class ValidationError(SigVerifyError, ValueError):
    """Input violates an operation's precondition."""


class FormatError(ValidationError):
    """Text input does not follow the expected file format."""


class DegenerateInputError(ValidationError):
    """Signature is too short, has zero duration, or has no spatial extent."""
