"""Confusion-matrix type, marginals, structural predicates and text I/O.

Rows are actual classes, columns are predicted classes. Counts are kept as
Python ints so that products of marginals stay exact until a metric converts
them to floats.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np


def sqrt_int(value: int) -> float:
    """Square root of a non-negative int, correctly rounded even past float range."""
    if value < 2**1000:
        return math.sqrt(value)
    return math.exp(0.5 * math.log(value))


class ParseError(ValueError):
    """Raised when a confusion-matrix text block cannot be read."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if col is not None:
            where.append(f"column {col}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.row = row
        self.col = col


class NonSquareError(ParseError):
    pass


class InvalidEntryError(ParseError):
    pass


class EmptyMatrixError(ParseError):
    pass


class TooFewClassesError(ParseError):
    pass


class DimensionError(ValueError):
    """An operation was applied to a matrix of the wrong size."""


@dataclass(frozen=True)
class Score:
    """A metric value.

    ``defined`` is False when a zero-denominator convention produced the value.
    ``warnings`` carries non-fatal notes (e.g. a violated modelling assumption).
    """

    value: float
    defined: bool = True
    warnings: tuple[str, ...] = ()

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: tuple[tuple[int, ...], ...]
    class_labels: tuple[str, ...] | None = None

    def __init__(self, counts, class_labels: Sequence[str] | None = None):
        rows = tuple(tuple(_as_count(v, r, c) for c, v in enumerate(row, 1))
                     for r, row in enumerate(counts, 1))
        k = len(rows)
        if k < 2:
            raise TooFewClassesError(f"need at least 2 classes, got {k}")
        for r, row in enumerate(rows, 1):
            if len(row) != k:
                raise NonSquareError(f"expected {k} entries, got {len(row)}", row=r)
        if not any(v for row in rows for v in row):
            raise EmptyMatrixError("confusion matrix has no cases")
        if class_labels is not None:
            class_labels = tuple(str(s) for s in class_labels)
            if len(class_labels) != k:
                raise ParseError(f"{len(class_labels)} labels for {k} classes")
        object.__setattr__(self, "counts", rows)
        object.__setattr__(self, "class_labels", class_labels)

    @property
    def k(self) -> int:
        return len(self.counts)

    @property
    def n(self) -> int:
        return sum(map(sum, self.counts))

    @property
    def diag(self) -> tuple[int, ...]:
        return tuple(self.counts[i][i] for i in range(self.k))

    def to_array(self) -> np.ndarray:
        return np.array(self.counts, dtype=np.int64)

    @classmethod
    def from_array(cls, arr, class_labels=None) -> "ConfusionMatrix":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-D array, got shape {arr.shape}")
        return cls(arr.tolist(), class_labels)

    def transpose(self) -> "ConfusionMatrix":
        return ConfusionMatrix(list(zip(*self.counts)), self.class_labels)

    def scaled(self, m: int) -> "ConfusionMatrix":
        return ConfusionMatrix([[m * v for v in row] for row in self.counts], self.class_labels)


def _as_count(v, row: int, col: int) -> int:
    if isinstance(v, (bool, np.bool_)):
        raise InvalidEntryError(f"boolean entry {v!r}", row=row, col=col)
    if isinstance(v, (int, np.integer)):
        iv = int(v)
    elif isinstance(v, (float, np.floating)) and float(v).is_integer():
        iv = int(v)
    else:
        raise InvalidEntryError(f"non-integer entry {v!r}", row=row, col=col)
    if iv < 0:
        raise InvalidEntryError(f"negative entry {iv}", row=row, col=col)
    return iv


@dataclass(frozen=True)
class Marginals:
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    total: int


@dataclass(frozen=True)
class StructureFlags:
    is_diagonal: bool
    is_hollow: bool
    zero_rows: frozenset[int] = field(default_factory=frozenset)
    zero_cols: frozenset[int] = field(default_factory=frozenset)


@dataclass(frozen=True)
class BinaryCounts:
    tp: int
    fn: int
    fp: int
    tn: int

    @property
    def n(self) -> int:
        return self.tp + self.fn + self.fp + self.tn


def marginals(cm: ConfusionMatrix) -> Marginals:
    """Row sums (actual-class sizes), column sums (predicted-class sizes) and N."""
    alpha = tuple(sum(row) for row in cm.counts)
    beta = tuple(sum(col) for col in zip(*cm.counts))
    return Marginals(alpha, beta, sum(alpha))


def structure(cm: ConfusionMatrix) -> StructureFlags:
    """Zero-based indices are used for ``zero_rows``/``zero_cols``."""
    c = cm.counts
    k = cm.k
    m = marginals(cm)
    return StructureFlags(
        is_diagonal=all(c[i][j] == 0 for i in range(k) for j in range(k) if i != j),
        is_hollow=all(c[i][i] == 0 for i in range(k)),
        zero_rows=frozenset(i for i, a in enumerate(m.alpha) if a == 0),
        zero_cols=frozenset(i for i, b in enumerate(m.beta) if b == 0),
    )


def binary_counts(cm: ConfusionMatrix) -> BinaryCounts:
    """TP/FN/FP/TN with class 1 (first row/column) as the positive class."""
    if cm.k != 2:
        raise DimensionError(f"binary counts need a 2x2 matrix, got {cm.k}x{cm.k}")
    (tp, fn), (fp, tn) = cm.counts
    return BinaryCounts(tp=tp, fn=fn, fp=fp, tn=tn)


_SPLIT = re.compile(r"[,\s]+")


def parse_confusion_matrix(text: str) -> ConfusionMatrix:
    """Read one matrix from its text form.

    Lines are rows; entries are separated by commas and/or whitespace. Lines
    starting with ``#`` and blank lines are skipped. An optional first
    ``labels: a,b,c`` line names the classes.
    """
    labels = None
    rows: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower().startswith("labels:"):
            if rows or labels is not None:
                raise ParseError("labels line must precede the matrix rows")
            labels = [s.strip() for s in line.split(":", 1)[1].split(",") if s.strip()]
            continue
        rows.append([tok for tok in _SPLIT.split(line) if tok])

    if not rows:
        raise EmptyMatrixError("no matrix rows found")
    k = len(rows)
    for r, toks in enumerate(rows, 1):
        if len(toks) != k:
            raise NonSquareError(f"expected {k} entries, got {len(toks)}", row=r)
    values = []
    for r, toks in enumerate(rows, 1):
        row = []
        for c, tok in enumerate(toks, 1):
            if not re.fullmatch(r"[+-]?\d+", tok):
                raise InvalidEntryError(f"non-integer entry {tok!r}", row=r, col=c)
            v = int(tok)
            if v < 0:
                raise InvalidEntryError(f"negative entry {v}", row=r, col=c)
            row.append(v)
        values.append(row)
    return ConfusionMatrix(values, labels)


def render(cm: ConfusionMatrix) -> str:
    """Canonical text form; ``parse_confusion_matrix(render(cm)) == cm``."""
    lines = []
    if cm.class_labels is not None:
        lines.append("labels: " + ",".join(cm.class_labels))
    lines.extend(",".join(str(v) for v in row) for row in cm.counts)
    return "\n".join(lines) + "\n"


def iter_blocks(text: str) -> Iterator[ConfusionMatrix]:
    """Yield every matrix in a multi-block document (blocks split by blank lines)."""
    block: list[str] = []
    for line in text.splitlines() + [""]:
        if line.strip():
            block.append(line)
        elif block:
            if any(b.strip() and not b.lstrip().startswith("#") for b in block):
                yield parse_confusion_matrix("\n".join(block))
            block = []
