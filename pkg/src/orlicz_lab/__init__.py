"""Numerical toolkit for Orlicz functions, lattice norms on step functions,
compactness probes and pointwise multipliers."""
from . import compactness, io, multipliers, norms, orlicz, stepfn
from .errors import BracketError, DomainError, ExtrapolationError, InputError, NumericError, OrliczLabError
from .norms import L1, Intersection, LambdaW, LorentzP1, Lp, Orlicz, norm
from .stepfn import BlockSet, StepFunction

__version__ = "0.1.0"

__all__ = [
    "BlockSet", "BracketError", "DomainError", "ExtrapolationError", "InputError",
    "Intersection", "L1", "LambdaW", "LorentzP1", "Lp", "NumericError", "Orlicz",
    "OrliczLabError", "StepFunction", "compactness", "io", "multipliers", "norm",
    "norms", "orlicz", "stepfn",
]
