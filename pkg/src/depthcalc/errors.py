"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: validation problems exit 1, failed
computations exit 2, exhausted resource caps exit 3.
"""


class DepthCalcError(Exception):
    """Base class for all library errors."""


class ValidationError(DepthCalcError, ValueError):
    """Bad input: broken invariants, out-of-domain arguments, bad schemas."""


class ComputationError(DepthCalcError):
    """A well-formed computation that could not be completed."""


class ResourceLimitError(DepthCalcError):
    """An enumeration or table would exceed its configured cap."""
