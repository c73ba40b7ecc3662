"""Randomised comparison of closed-form metrics against the sequence oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import binary, enhanced, multinary, oracle
from .core import ConfusionMatrix, binary_counts
from .generator import Family, FamilySpec, generate


@dataclass
class Mismatch:
    trial: int
    check: str
    matrix: list[list[int]]
    closed_form: float
    reference: float


@dataclass
class CrossCheckReport:
    trials: int
    comparisons: int = 0
    max_abs_error: float = 0.0
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def random_matrix(rng: np.random.Generator, k_range=(2, 5), n_max: int = 2000) -> ConfusionMatrix:
    """A random family member with random K and N (Imbalanced32 needs K >= 3)."""
    family = Family(list(Family)[rng.integers(len(Family))])
    lo = 3 if family is Family.IMBALANCED_32 else k_range[0]
    k = int(rng.integers(max(lo, k_range[0]), k_range[1] + 1))
    n = int(rng.integers(k, n_max + 1))
    return generate(FamilySpec(family, k, n), int(rng.integers(2**31)), int(rng.integers(2**31)))


def compare(cm: ConfusionMatrix, tol: float = 1e-10, trial: int = 0,
            report: CrossCheckReport | None = None) -> CrossCheckReport:
    report = report if report is not None else CrossCheckReport(trials=1)
    seqs = oracle.build_sequences(cm)
    pairs = [
        ("R_K", multinary.r_k(cm), oracle.r_k_from_sequences(seqs), tol),
        ("MPC1", multinary.mpc1(cm), oracle.mpc1_from_sequences(seqs), tol),
        ("MPC2", multinary.mpc2(cm), oracle.mpc2_from_sequences(seqs), tol),
        ("EMCC", enhanced.emcc(cm), oracle.emcc_correlation_form(seqs), tol),
        ("ER_K", enhanced.er_k(cm), oracle.er_k_rho_from_sequences(cm, 0), tol),
        ("EMPC2", enhanced.empc2(cm), oracle.empc2_rho_from_sequences(cm, 0), tol),
    ]
    if cm.k == 2:
        pairs.append(("MCC", binary.mcc(binary_counts(cm)),
                      oracle.pcc(seqs.t[0], seqs.c[0]), min(tol, 1e-12)))
    for name, closed, ref, t in pairs:
        if closed.defined != ref.defined:
            report.mismatches.append(Mismatch(trial, f"{name} defined flag", [list(r) for r in cm.counts],
                                              float(closed.defined), float(ref.defined)))
            continue
        if not closed.defined:
            continue
        err = abs(closed.value - ref.value)
        report.comparisons += 1
        report.max_abs_error = max(report.max_abs_error, err)
        if err > t:
            report.mismatches.append(Mismatch(trial, name, [list(r) for r in cm.counts],
                                              closed.value, ref.value))
    return report


def run_cross_check(trials: int, seed: int = 0, tol: float = 1e-10) -> CrossCheckReport:
    rng = np.random.default_rng(seed)
    report = CrossCheckReport(trials=trials)
    for i in range(trials):
        compare(random_matrix(rng), tol, i, report)
    return report
