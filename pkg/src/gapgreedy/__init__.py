"""Thresholding greedy algorithm and greedy-type constants for sequences with gaps."""

from .core import CoeffVector, IndexSet, SignPattern, indicator, signed_indicator
from .estimate import ConstantEstimate
from .norms import (AdditiveGapNorm, LacunaryNorm, LpNorm, MixedPQNorm, NormConfigError, OikhbergNorm,
                    SpaceNorm, norm_from_spec, preset)
from .sequences import GapSequence, classify

__all__ = [
    "AdditiveGapNorm", "CoeffVector", "ConstantEstimate", "GapSequence", "IndexSet", "LacunaryNorm",
    "LpNorm", "MixedPQNorm", "NormConfigError", "OikhbergNorm", "SignPattern", "SpaceNorm", "classify",
    "indicator", "norm_from_spec", "preset", "signed_indicator",
]
__version__ = "0.1.0"
