"""Sequence-level reference implementation.

Every correlation metric in the package has a closed form in terms of
confusion-matrix counts. This module recomputes them the long way: it lays
out one 0/1 indicator sequence per class for the actual and predicted labels
and evaluates Pearson correlations and covariance matrices on those sequences
directly. It is meant for cross-checking, not for scoring large datasets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import ConfusionMatrix, Score

DEFAULT_MAX_CASES = 10**6


class SequenceTooLongError(ValueError):
    pass


class NonIntegerDimensionError(ValueError):
    pass


@dataclass(frozen=True)
class IndicatorSequences:
    t: np.ndarray  # (K, N): t[k, n] = 1 if case n is actually class k
    c: np.ndarray  # (K, N): c[k, n] = 1 if case n was predicted as class k

    @property
    def n(self) -> int:
        return self.t.shape[1]

    @property
    def k(self) -> int:
        return self.t.shape[0]


@dataclass(frozen=True)
class CovarianceSummary:
    rtc: np.ndarray
    rtt: np.ndarray
    rcc: np.ndarray
    t_mean: np.ndarray
    c_mean: np.ndarray

    @property
    def rtc_diag(self) -> np.ndarray:
        return np.diag(self.rtc)

    @property
    def rtt_diag(self) -> np.ndarray:
        return np.diag(self.rtt)

    @property
    def rcc_diag(self) -> np.ndarray:
        return np.diag(self.rcc)


@dataclass(frozen=True)
class ReducedPair:
    t_red: np.ndarray
    c_red: np.ndarray

    @property
    def n_k(self) -> int:
        return len(self.t_red)


def build_sequences(cm: ConfusionMatrix, max_cases: int = DEFAULT_MAX_CASES) -> IndicatorSequences:
    """Expand counts into cases ordered by (actual, predicted) block."""
    n = cm.n
    if n > max_cases:
        raise SequenceTooLongError(f"N = {n} exceeds the cap of {max_cases} cases")
    k = cm.k
    arr = cm.to_array()
    actual = np.repeat(np.repeat(np.arange(k), k), arr.ravel())
    predicted = np.repeat(np.tile(np.arange(k), k), arr.ravel())
    t = np.zeros((k, n), dtype=np.int8)
    c = np.zeros((k, n), dtype=np.int8)
    t[actual, np.arange(n)] = 1
    c[predicted, np.arange(n)] = 1
    return IndicatorSequences(t, c)


def pcc(x, y) -> Score:
    """Pearson correlation of two equal-length sequences (1/N normalisation)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("pcc needs two 1-D sequences of equal length")
    if len(x) < 2:
        raise ValueError("pcc needs at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = np.dot(dx, dx)
    syy = np.dot(dy, dy)
    if sxx == 0 or syy == 0:
        return Score(0.0, defined=False)
    return Score(float(np.dot(dx, dy) / (math.sqrt(sxx) * math.sqrt(syy))))


def affine_relabel(x, a: float, b: float) -> np.ndarray:
    """Return a + b*x; b must be positive so the ordering of labels is kept."""
    if not b > 0:
        raise ValueError(f"scale must be positive, got {b!r}")
    return a + b * np.asarray(x, dtype=float)


def covariance_summary(seqs: IndicatorSequences) -> CovarianceSummary:
    t = seqs.t.astype(float)
    c = seqs.c.astype(float)
    n = seqs.n
    t_mean = t.mean(axis=1)
    c_mean = c.mean(axis=1)
    dt = t - t_mean[:, None]
    dc = c - c_mean[:, None]
    return CovarianceSummary(
        rtc=dt @ dc.T / n,
        rtt=dt @ dt.T / n,
        rcc=dc @ dc.T / n,
        t_mean=t_mean,
        c_mean=c_mean,
    )


def r_k_from_sequences(seqs: IndicatorSequences) -> Score:
    cov = covariance_summary(seqs)
    tt = np.trace(cov.rtt)
    cc = np.trace(cov.rcc)
    if tt <= 0 or cc <= 0:
        return Score(0.0, defined=False)
    return Score(float(np.trace(cov.rtc) / math.sqrt(tt * cc)))


def mpc1_from_sequences(seqs: IndicatorSequences) -> Score:
    if seqs.n < 2:
        return Score(0.0, defined=False)
    terms = [pcc(seqs.t[k], seqs.c[k]) for k in range(seqs.k)]
    return Score(sum(s.value for s in terms) / seqs.k, defined=all(s.defined for s in terms))


def mpc2_from_sequences(seqs: IndicatorSequences) -> Score:
    cov = covariance_summary(seqs)
    den = float(np.sum(np.sqrt(cov.rtt_diag * cov.rcc_diag)))
    if den <= 0:
        return Score(0.0, defined=False)
    return Score(float(np.trace(cov.rtc) / den))


def reduce_dimension(cm: ConfusionMatrix, k: int, rho: float) -> ReducedPair:
    """Shortened indicator pair for class ``k`` (zero-based) of length alpha + beta - rho*C.

    The pair keeps every one of both sequences, the C_kk overlapping ones and
    (1 - rho)*C_kk shared zeros. rho*C_kk must be an integer; for other rho use
    the closed-form per-class term instead.
    """
    if rho > 1:
        raise ValueError(f"rho must be <= 1, got {rho!r}")
    alpha = sum(cm.counts[k])
    beta = sum(row[k] for row in cm.counts)
    c = cm.counts[k][k]
    shared_zeros = (1 - Fraction(rho)) * c
    if shared_zeros.denominator != 1:
        raise NonIntegerDimensionError(
            f"rho*C_kk = {float(rho) * c!r} is not an integer; use the analytic delta_k"
        )
    z = int(shared_zeros)
    t_red = np.concatenate([np.ones(c), np.ones(alpha - c), np.zeros(beta - c), np.zeros(z)])
    c_red = np.concatenate([np.ones(c), np.zeros(alpha - c), np.ones(beta - c), np.zeros(z)])
    return ReducedPair(t_red.astype(np.int8), c_red.astype(np.int8))


def _reduced_covariances(cm: ConfusionMatrix, rho: float):
    out = []
    for k in range(cm.k):
        alpha = sum(cm.counts[k])
        beta = sum(row[k] for row in cm.counts)
        if alpha + beta == 0:
            continue
        pair = reduce_dimension(cm, k, rho)
        t = pair.t_red.astype(float)
        c = pair.c_red.astype(float)
        dt = t - t.mean()
        dc = c - c.mean()
        n_k = pair.n_k
        out.append((np.dot(dt, dc) / n_k, np.dot(dt, dt) / n_k, np.dot(dc, dc) / n_k))
    return out


def er_k_rho_from_sequences(cm: ConfusionMatrix, rho: float) -> Score:
    covs = _reduced_covariances(cm, rho)
    tc = sum(x[0] for x in covs)
    tt = sum(x[1] for x in covs)
    cc = sum(x[2] for x in covs)
    if tt <= 0 or cc <= 0:
        return Score(0.0, defined=False)
    return Score(float(tc / math.sqrt(tt * cc)))


def empc2_rho_from_sequences(cm: ConfusionMatrix, rho: float) -> Score:
    covs = _reduced_covariances(cm, rho)
    den = sum(math.sqrt(x[1] * x[2]) for x in covs)
    if den <= 0:
        return Score(0.0, defined=False)
    return Score(float(sum(x[0] for x in covs) / den))


def empc1_rho_from_sequences(cm: ConfusionMatrix, rho: float) -> Score:
    terms = []
    for k in range(cm.k):
        pair = reduce_dimension(cm, k, rho)
        if pair.n_k >= 2:
            terms.append(pcc(pair.t_red, pair.c_red))
    kept = [s.value for s in terms if s.defined]
    if not kept:
        return Score(0.0, defined=False)
    return Score(sum(kept) / len(kept), defined=len(kept) == cm.k)


def emcc_correlation_form(seqs: IndicatorSequences) -> Score:
    """Extended MCC written as a product of per-class overlap ratios.

    Same zero-marginal handling as the closed form: an absent class is
    skipped, and a class present on one side only contributes 0 to the first
    product and 1 to the second.
    """
    t = seqs.t.astype(float)
    c = seqs.c.astype(float)
    first = 1.0
    second = 1.0
    limit_used = False
    for k in range(seqs.k):
        stt = np.dot(t[k], t[k])
        scc = np.dot(c[k], c[k])
        if stt == 0 and scc == 0:
            continue
        if stt * scc == 0:
            first = 0.0
            limit_used = True
            continue
        first *= np.dot(t[k], c[k]) / math.sqrt(stt * scc)
        second *= math.sqrt(np.dot(t[k], t[k] - c[k]) * np.dot(c[k], c[k] - t[k]) / (stt * scc))
    return Score(float(first - second), defined=not limit_used)


def binary_sums(cm: ConfusionMatrix) -> dict[str, int]:
    """Sequence sums for K = 2 via the u = [1,1], v = [1,0] quadratic forms."""
    if cm.k != 2:
        raise ValueError("binary_sums needs a 2x2 matrix")
    a = cm.to_array()
    u = np.array([1, 1])
    v = np.array([1, 0])
    return {
        "n": int(u @ a @ u),
        "sum_t": int(v @ a @ u),
        "sum_c": int(u @ a @ v),
        "sum_tc": int(v @ a @ v),
    }
