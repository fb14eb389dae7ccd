"""Exact calculators for depth, Herbrand functions, affine Weyl groups and Hecke algebras."""

from .errors import ComputationError, DepthCalcError, ResourceLimitError, ValidationError
from .plcalc import PLFunction
from .ramification import RamificationProfile

__all__ = [
    "ComputationError", "DepthCalcError", "PLFunction", "RamificationProfile",
    "ResourceLimitError", "ValidationError",
]
__version__ = "0.1.0"
