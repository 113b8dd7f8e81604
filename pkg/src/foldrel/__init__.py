"""Fold-catastrophe relativistic Schrödinger toolkit.

Exact dimensional analysis, the fold potential and its relativistic forms,
Dirac-matrix algebra checks, plane-wave dispersion solvers and 1-D spectral
propagators.
"""

__version__ = "0.1.0"

from foldrel.exceptions import (
    AliasFrequency,
    BracketFailure,
    EigensolverFailure,
    EvanescentMode,
    FoldrelError,
    InconsistentSystem,
    InsufficientSamples,
    NoConvergence,
    NonLengthVariable,
    SingularPotentialNode,
    SingularRadius,
    UnresolvableWidth,
    WrapAmbiguity,
    ZeroNorm,
)
from foldrel.units import NATURAL, PhysParams, electron_si

__all__ = [
    "__version__",
    "PhysParams",
    "NATURAL",
    "electron_si",
    "FoldrelError",
    "InconsistentSystem",
    "NonLengthVariable",
    "SingularRadius",
    "EvanescentMode",
    "NoConvergence",
    "BracketFailure",
    "EigensolverFailure",
    "UnresolvableWidth",
    "AliasFrequency",
    "SingularPotentialNode",
    "ZeroNorm",
    "InsufficientSamples",
    "WrapAmbiguity",
]
