"""Correlation-based performance metrics for multiclass confusion matrices."""

from .binary import accuracy, f1, mcc
from .core import (
    BinaryCounts,
    ConfusionMatrix,
    DimensionError,
    Marginals,
    ParseError,
    Score,
    StructureFlags,
    binary_counts,
    marginals,
    parse_confusion_matrix,
    render,
    structure,
)
from .enhanced import (
    DEFAULT_RHO,
    delta_k,
    delta_k_limit,
    emcc,
    empc1,
    empc1_rho,
    empc1_rho_limit,
    empc2,
    empc2_rho,
    er_k,
    er_k_rho,
)
from .multinary import MpcMatrix, accuracy_rescaled, mpc1, mpc2, mpc_matrix, r_k

__version__ = "0.1.0"

__all__ = [
    "BinaryCounts", "ConfusionMatrix", "DimensionError", "Marginals", "MpcMatrix",
    "ParseError", "Score", "StructureFlags", "DEFAULT_RHO",
    "accuracy", "accuracy_rescaled", "binary_counts", "delta_k", "delta_k_limit",
    "emcc", "empc1", "empc1_rho", "empc1_rho_limit", "empc2", "empc2_rho",
    "er_k", "er_k_rho", "f1", "marginals", "mcc", "mpc1", "mpc2", "mpc_matrix",
    "parse_confusion_matrix", "r_k", "render", "structure",
]
