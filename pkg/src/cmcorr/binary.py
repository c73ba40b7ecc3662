"""Two-class metrics computed from TP/FN/FP/TN counts."""

from __future__ import annotations

from .core import BinaryCounts, Score, sqrt_int


def f1(counts: BinaryCounts) -> Score:
    """F1 = 2TP / (2TP + FP + FN).

    Not symmetric in the two classes. When every case is a true negative the
    ratio is 0/0 and 0 is returned, flagged undefined.
    """
    denom = 2 * counts.tp + counts.fp + counts.fn
    if denom == 0:
        return Score(0.0, defined=False)
    return Score(2 * counts.tp / denom)


def accuracy(counts: BinaryCounts) -> Score:
    return Score((counts.tp + counts.tn) / counts.n)


def mcc(counts: BinaryCounts) -> Score:
    """Matthews correlation coefficient.

    Returns 0 flagged undefined if any of the four marginal factors is zero.
    """
    tp, fn, fp, tn = counts.tp, counts.fn, counts.fp, counts.tn
    factors = (tp + fn, tp + fp, tn + fp, tn + fn)
    if 0 in factors:
        return Score(0.0, defined=False)
    num = tp * tn - fp * fn
    den = sqrt_int(factors[0] * factors[1] * factors[2] * factors[3])
    return Score(num / den)
