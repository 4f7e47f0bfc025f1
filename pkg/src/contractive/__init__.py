"""Numerics for contractive inclusions between weighted Bergman and Hardy spaces."""

from . import bounds, funcspace, norms, quad, search, special
from .errors import (
    AccuracyError,
    ContractiveError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    SpecParseError,
    UnsupportedVariantError,
)
from .funcspace import (
    AnalyticFunction,
    Kernel,
    Polynomial,
    SpaceParams,
    apply_isometry,
    kernel,
    normalized_kernel,
    parse_spec,
    target_exponent,
    target_space,
    to_spec,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "AnalyticFunction",
    "ContractiveError",
    "ConvergenceError",
    "DomainError",
    "EvaluationError",
    "Kernel",
    "Polynomial",
    "SpaceParams",
    "SpecParseError",
    "UnsupportedVariantError",
    "apply_isometry",
    "bounds",
    "funcspace",
    "kernel",
    "normalized_kernel",
    "norms",
    "parse_spec",
    "quad",
    "search",
    "special",
    "target_exponent",
    "target_space",
    "to_spec",
]
