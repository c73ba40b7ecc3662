"""Enhanced (reduced-dimension) correlation metrics and the extended MCC.

Each class k is scored on indicator sequences shortened to

    N_k = alpha_k + beta_k - rho * C_kk

which discards most of the zeros the actual and predicted sequences share.
rho = 0 gives ER_K / EMPC_1 / EMPC_2; rho close to 1 gives the stricter
tilde-E family. rho = 1 itself is excluded because a perfectly classified
class becomes 0/0 there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ConfusionMatrix, Score, marginals, sqrt_int
from .multinary import check_weights

DEFAULT_RHO = 0.9

LARGE_MARGINAL_WARNING = "alpha_k + beta_k >= N for some class"


@dataclass(frozen=True)
class PerClassTerm:
    k: int
    delta: float
    n_k: float
    defined: bool = True


def check_rho(rho: float) -> float:
    rho = float(rho)
    if not math.isfinite(rho) or rho >= 1:
        raise ValueError(
            f"rho must be finite and < 1, got {rho!r}; at rho = 1 a perfectly "
            "classified class gives 0/0"
        )
    return rho


def _assumption_warnings(cm: ConfusionMatrix) -> tuple[str, ...]:
    m = marginals(cm)
    if any(a + b >= m.total for a, b in zip(m.alpha, m.beta)):
        return (LARGE_MARGINAL_WARNING,)
    return ()


def er_k(cm: ConfusionMatrix) -> Score:
    """Enhanced R_K (rho = 0). Classes absent from both rows and columns are skipped."""
    m = marginals(cm)
    num = 0.0
    den = 0.0
    for c, a, b in zip(cm.diag, m.alpha, m.beta):
        s = a + b
        if s == 0:
            continue
        num += c / s
        den += a * b / (s * s)
    if den == 0:
        return Score(0.0, defined=False)
    return Score(num / den - 1, warnings=_assumption_warnings(cm))


def empc2(cm: ConfusionMatrix) -> Score:
    """Enhanced MPC_2; identical to :func:`er_k` after simplification."""
    return er_k(cm)


def empc1(cm: ConfusionMatrix, weights: Sequence[float] | None = None) -> Score:
    """Enhanced MPC_1: mean over classes of (alpha+beta)*C/(alpha*beta) - 1.

    Classes with alpha*beta = 0 are dropped (result flagged) and the average,
    or the supplied weights, renormalised over the retained classes.
    """
    m = marginals(cm)
    w = np.full(cm.k, 1.0) if weights is None else check_weights(weights, cm.k)
    total_w = 0.0
    acc = []
    for k, (c, a, b) in enumerate(zip(cm.diag, m.alpha, m.beta)):
        if a * b == 0:
            continue
        acc.append(w[k] * ((a + b) * c / (a * b) - 1))
        total_w += w[k]
    dropped = len(acc) < cm.k
    if not acc or total_w == 0:
        return Score(0.0, defined=False)
    return Score(math.fsum(acc) / total_w, defined=not dropped,
                 warnings=_assumption_warnings(cm))


def emcc(cm: ConfusionMatrix) -> Score:
    """Extended MCC.

        (prod C_kk - sqrt(prod (alpha_k - C_kk)(beta_k - C_kk))) / sqrt(prod alpha_k beta_k)

    Zero marginals: a class with alpha = beta = 0 is removed. A class with
    exactly one zero marginal has C_kk = 0, so the first product vanishes and
    the class's factor in the second product tends to 1 once the common
    sqrt(alpha_k beta_k) is cancelled; the result is flagged undefined.
    """
    m = marginals(cm)
    p_diag = 1
    p_off = 1
    p_norm = 1
    limit_used = False
    for c, a, b in zip(cm.diag, m.alpha, m.beta):
        if a == 0 and b == 0:
            continue
        if a * b == 0:
            p_diag = 0
            limit_used = True
            continue
        p_diag *= c
        p_off *= (a - c) * (b - c)
        p_norm *= a * b
    if p_norm < 1e300:
        value = (p_diag - sqrt_int(p_off)) / sqrt_int(p_norm)
    else:
        # math.log accepts arbitrarily large ints; products stay exact up to here
        half_log_norm = 0.5 * math.log(p_norm)
        first = math.exp(math.log(p_diag) - half_log_norm) if p_diag else 0.0
        second = math.exp(0.5 * math.log(p_off) - half_log_norm) if p_off else 0.0
        value = first - second
    return Score(value, defined=not limit_used)


def _delta(c: int, a: int, b: int, rho: float) -> float:
    # (N_k C - a b) rewritten as (1 - rho) C^2 - (a - C)(b - C) to avoid cancellation near rho = 1
    num = (1.0 - rho) * c * c - (a - c) * (b - c)
    den = math.sqrt(a * b) * math.sqrt((a - rho * c) * (b - rho * c))
    return num / den


def delta_k(cm: ConfusionMatrix, k: int, rho: float = DEFAULT_RHO) -> PerClassTerm:
    """Per-class Pearson coefficient on sequences of length N_k (zero-based ``k``)."""
    rho = check_rho(rho)
    m = marginals(cm)
    c, a, b = cm.counts[k][k], m.alpha[k], m.beta[k]
    n_k = a + b - rho * c
    if a * b == 0:
        return PerClassTerm(k, 0.0, n_k, defined=False)
    return PerClassTerm(k, _delta(c, a, b, rho), n_k)


def delta_k_limit(cm: ConfusionMatrix, k: int) -> PerClassTerm:
    """Limit of :func:`delta_k` as rho -> 1 from below.

    Equals -sqrt((alpha-C)(beta-C) / (alpha beta)), except a perfectly
    classified class (alpha = beta = C) stays at 1.
    """
    m = marginals(cm)
    c, a, b = cm.counts[k][k], m.alpha[k], m.beta[k]
    if a * b == 0:
        return PerClassTerm(k, 0.0, float(a + b - c), defined=False)
    if a == c and b == c:
        return PerClassTerm(k, 1.0, float(c))
    return PerClassTerm(k, -math.sqrt((a - c) * (b - c) / (a * b)), float(a + b - c))


def _mean_terms(terms: list[PerClassTerm], weights, k: int) -> Score:
    w = np.full(k, 1.0) if weights is None else check_weights(weights, k)
    kept = [(w[t.k], t.delta) for t in terms if t.defined]
    total_w = sum(wk for wk, _ in kept)
    if not kept or total_w == 0:
        return Score(0.0, defined=False)
    return Score(float(math.fsum(wk * d for wk, d in kept) / total_w),
                 defined=len(kept) == len(terms))


def empc1_rho(cm: ConfusionMatrix, rho: float = DEFAULT_RHO,
              weights: Sequence[float] | None = None) -> Score:
    """Mean of :func:`delta_k` over classes; degenerate classes are dropped and flagged."""
    rho = check_rho(rho)
    return _mean_terms([delta_k(cm, k, rho) for k in range(cm.k)], weights, cm.k)


def empc1_rho_limit(cm: ConfusionMatrix, weights: Sequence[float] | None = None) -> Score:
    return _mean_terms([delta_k_limit(cm, k) for k in range(cm.k)], weights, cm.k)


def _rho_sums(cm: ConfusionMatrix, rho: float):
    m = marginals(cm)
    num = var_t = var_c = joint = 0.0
    for c, a, b in zip(cm.diag, m.alpha, m.beta):
        n_k = a + b - rho * c
        if n_k <= 0:
            continue
        n2 = n_k * n_k
        num += ((1.0 - rho) * c * c - (a - c) * (b - c)) / n2
        var_t += a * (b - rho * c) / n2
        var_c += b * (a - rho * c) / n2
        joint += math.sqrt(a * b) * math.sqrt((a - rho * c) * (b - rho * c)) / n2
    return num, var_t, var_c, joint


def er_k_rho(cm: ConfusionMatrix, rho: float = DEFAULT_RHO) -> Score:
    rho = check_rho(rho)
    num, var_t, var_c, _ = _rho_sums(cm, rho)
    if var_t <= 0 or var_c <= 0:
        return Score(0.0, defined=False)
    return Score(num / (math.sqrt(var_t) * math.sqrt(var_c)))


def empc2_rho(cm: ConfusionMatrix, rho: float = DEFAULT_RHO) -> Score:
    rho = check_rho(rho)
    num, _, _, joint = _rho_sums(cm, rho)
    if joint <= 0:
        return Score(0.0, defined=False)
    return Score(num / joint)
