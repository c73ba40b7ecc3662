"""R_K, the multivariate Pearson correlation (MPC) matrix and its scalar summaries.

All formulas work on integer confusion-matrix counts. With N cases, the
per-class covariances scaled by N**2 are

    N**2 [R_tc]_kl = N*C_kl - alpha_k*beta_l
    N**2 [R_tt]_kk = alpha_k*(N - alpha_k)
    N**2 [R_cc]_ll = beta_l*(N - beta_l)

and the common N**2 cancels in every ratio below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ConfusionMatrix, Score, marginals, sqrt_int


@dataclass(frozen=True)
class MpcMatrix:
    """Entry (k, l) is corr(t(k), c(l)); ``defined[k, l]`` is False where a variance is zero."""

    values: np.ndarray
    defined: np.ndarray

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.values)


def check_weights(weights: Sequence[float], k: int) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.shape != (k,):
        raise ValueError(f"expected {k} weights, got shape {w.shape}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and non-negative")
    if abs(w.sum() - 1.0) > 1e-9:
        raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
    return w


def r_k(cm: ConfusionMatrix) -> Score:
    """Trace-based multiclass extension of MCC."""
    m = marginals(cm)
    n = m.total
    num = sum(n * c - a * b for c, a, b in zip(cm.diag, m.alpha, m.beta))
    var_t = sum(a * (n - a) for a in m.alpha)
    var_c = sum(b * (n - b) for b in m.beta)
    if var_t == 0 or var_c == 0:
        return Score(0.0, defined=False)
    return Score(num / (sqrt_int(var_t * var_c)))


def mpc_matrix(cm: ConfusionMatrix) -> MpcMatrix:
    m = marginals(cm)
    n, k = m.total, cm.k
    values = np.zeros((k, k))
    defined = np.zeros((k, k), dtype=bool)
    for i in range(k):
        var_t = m.alpha[i] * (n - m.alpha[i])
        for j in range(k):
            var_c = m.beta[j] * (n - m.beta[j])
            if var_t == 0 or var_c == 0:
                continue
            cov = n * cm.counts[i][j] - m.alpha[i] * m.beta[j]
            values[i, j] = cov / (sqrt_int(var_t * var_c))
            defined[i, j] = True
    return MpcMatrix(values, defined)


def _per_class_pcc(cm: ConfusionMatrix) -> list[float | None]:
    m = marginals(cm)
    n = m.total
    out: list[float | None] = []
    for c, a, b in zip(cm.diag, m.alpha, m.beta):
        var_t, var_c = a * (n - a), b * (n - b)
        if var_t == 0 or var_c == 0:
            out.append(None)
        else:
            out.append((n * c - a * b) / (sqrt_int(var_t * var_c)))
    return out


def mpc1(cm: ConfusionMatrix, weights: Sequence[float] | None = None) -> Score:
    """Average of the per-class Pearson coefficients (diagonal of the MPC matrix).

    A class with a constant indicator sequence has no correlation; its term
    counts as 0 and the result is flagged undefined.
    """
    terms = _per_class_pcc(cm)
    w = np.full(cm.k, 1.0 / cm.k) if weights is None else check_weights(weights, cm.k)
    value = math.fsum(wk * (t or 0.0) for wk, t in zip(w, terms))
    return Score(value, defined=None not in terms)


def mpc2(cm: ConfusionMatrix) -> Score:
    """Summed per-class covariances over summed per-class normalisers."""
    m = marginals(cm)
    n = m.total
    num = sum(n * c - a * b for c, a, b in zip(cm.diag, m.alpha, m.beta))
    den = math.fsum(sqrt_int(a * (n - a) * b * (n - b))
                    for a, b in zip(m.alpha, m.beta))
    if den == 0:
        return Score(0.0, defined=False)
    return Score(num / den)


def accuracy_rescaled(cm: ConfusionMatrix) -> Score:
    """Accuracy mapped onto [-1, 1]: 2*trace/N - 1."""
    return Score(2 * sum(cm.diag) / cm.n - 1)
