"""Seeded random confusion matrices for seven structural families.

Each replicate draws a cell-probability template for its family and then
samples N cases over the K*K cells (multinomial), so every matrix sums to N
exactly and cells with zero template weight stay zero.

Random streams: numpy ``PCG64`` seeded by ``SeedSequence(master_seed,
spawn_key=(family_index, replicate))``. A replicate's matrix therefore
depends only on (family, K, N, master_seed, replicate), never on the order
in which replicates are evaluated.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import ConfusionMatrix

RNG_ALGORITHM = "numpy.random.PCG64 via SeedSequence(master_seed, spawn_key=(family_index, replicate))"


class Family(str, enum.Enum):
    DIAGONAL = "diagonal"
    DIAGONALLY_DOMINANT = "diagonally_dominant"
    HOLLOW = "hollow"
    OFF_DIAGONALLY_DOMINANT = "off_diagonally_dominant"
    NEARLY_UNIFORM = "nearly_uniform"
    IMBALANCED_32 = "imbalanced_32"
    IMBALANCED_14 = "imbalanced_14"

    @property
    def index(self) -> int:
        return list(Family).index(self)

    @classmethod
    def parse(cls, name: str) -> "Family":
        key = name.strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(f.value for f in cls)
            raise ValueError(f"unknown family {name!r}; choose from {choices}") from None


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    k: int = 5
    n: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        min_k = 3 if self.family is Family.IMBALANCED_32 else 2
        if self.k < min_k:
            raise ValueError(f"{self.family.value} needs K >= {min_k}, got {self.k}")
        if self.n < self.k:
            raise ValueError(f"N must be at least K, got N={self.n}, K={self.k}")


def replicate_rng(master_seed: int, family: Family, replicate: int) -> np.random.Generator:
    ss = np.random.SeedSequence(master_seed, spawn_key=(Family(family).index, replicate))
    return np.random.Generator(np.random.PCG64(ss))


def _split(rng: np.random.Generator, mass: float, size: int) -> np.ndarray:
    """Split ``mass`` over ``size`` cells, uniformly on the simplex."""
    return mass * rng.dirichlet(np.ones(size))


def _similar(rng: np.random.Generator, mass: float, size: int) -> np.ndarray:
    """Split ``mass`` over ``size`` cells of roughly equal weight."""
    w = rng.uniform(0.8, 1.2, size)
    return mass * w / w.sum()


def family_template(spec: FamilySpec, rng: np.random.Generator) -> np.ndarray:
    """Cell probabilities (K x K, summing to 1) for one replicate."""
    k = spec.k
    p = np.zeros((k, k))
    diag = np.eye(k, dtype=bool)
    off = ~diag
    fam = spec.family

    if fam is Family.DIAGONAL:
        p[diag] = _split(rng, 1.0, k)
    elif fam is Family.HOLLOW:
        p[off] = _split(rng, 1.0, k * k - k)
    elif fam in (Family.DIAGONALLY_DOMINANT, Family.OFF_DIAGONALLY_DOMINANT):
        lo, hi = (0.7, 0.95) if fam is Family.DIAGONALLY_DOMINANT else (0.02, 0.2)
        on_diag = rng.uniform(lo, hi)
        p[diag] = _split(rng, on_diag, k)
        p[off] = _split(rng, 1.0 - on_diag, k * k - k)
    elif fam is Family.NEARLY_UNIFORM:
        p[:] = _similar(rng, 1.0, k * k).reshape(k, k)
    elif fam is Family.IMBALANCED_32:
        big = np.zeros((k, k), dtype=bool)
        big[[0, 1, 2], [0, 1, 2]] = True
        p[big] = _split(rng, 0.5, 3)
        p[~big] = _similar(rng, 0.5, k * k - 3)
    elif fam is Family.IMBALANCED_14:
        p[0, 0] = 0.9
        p[off] = _similar(rng, 0.1, k * k - k)
    else:  # pragma: no cover
        raise ValueError(f"unhandled family {fam!r}")
    return p


def generate(spec: FamilySpec, replicate: int, master_seed: int) -> ConfusionMatrix:
    rng = replicate_rng(master_seed, spec.family, replicate)
    p = family_template(spec, rng).ravel()
    # multinomial rejects p whose leading entries exceed 1 by rounding
    p = p / p.sum()
    counts = rng.multinomial(spec.n, p).reshape(spec.k, spec.k)
    return ConfusionMatrix(counts.tolist())
