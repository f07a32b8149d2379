"""Exact Segre-chain geometry and nondegeneracy classification.

Thin wrapper around the compiled core. All arithmetic is exact over the
Gaussian rationals; every verdict is stamped with its truncation order.
"""

from ._core import (
    FormalMap,
    GenericManifold,
    InputParseError,
    PreconditionViolation,
    Series,
    SeriesArithmeticError,
    classify_manifold,
    classify_map,
    corpus_text,
    run_command,
    segre_type,
    theta_from_graph,
)

__all__ = [
    "FormalMap",
    "GenericManifold",
    "InputParseError",
    "PreconditionViolation",
    "Series",
    "SeriesArithmeticError",
    "classify_manifold",
    "classify_map",
    "corpus_text",
    "run_command",
    "segre_type",
    "theta_from_graph",
]

__version__ = "0.1.0"
