"""Monte-Carlo comparison of metrics across confusion-matrix families.

Replicates are independent work units. Workers return scores in replicate
order and the parent concatenates them, so histograms and summaries are the
same for any number of workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import binary, enhanced, multinary
from .core import ConfusionMatrix, Score, binary_counts, parse_confusion_matrix
from .generator import Family, FamilySpec, generate

METRICS: dict[str, Callable[[ConfusionMatrix, float], Score]] = {
    "R_K": lambda cm, rho: multinary.r_k(cm),
    "MPC1": lambda cm, rho: multinary.mpc1(cm),
    "MPC2": lambda cm, rho: multinary.mpc2(cm),
    "ER_K": lambda cm, rho: enhanced.er_k(cm),
    "EMPC1": lambda cm, rho: enhanced.empc1(cm),
    "EMPC2": lambda cm, rho: enhanced.empc2(cm),
    "EMCC": lambda cm, rho: enhanced.emcc(cm),
    "A": lambda cm, rho: multinary.accuracy_rescaled(cm),
    "EMPC1_rho": lambda cm, rho: enhanced.empc1_rho(cm, rho),
    "ER_K_rho": lambda cm, rho: enhanced.er_k_rho(cm, rho),
    "EMPC2_rho": lambda cm, rho: enhanced.empc2_rho(cm, rho),
}

ENHANCED = ("ER_K", "EMPC1", "EMPC2")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _round12(x: float) -> float:
    return float(_fmt(x))


@dataclass(frozen=True)
class ExperimentConfig:
    families: tuple[Family, ...] = tuple(Family)
    replicates: int = 1000
    metrics: tuple[str, ...] = tuple(METRICS)
    rho: float = enhanced.DEFAULT_RHO
    master_seed: int = 0
    histogram_bins: int = 40
    k: int = 5
    n: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(Family(f) for f in self.families))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.histogram_bins < 2:
            raise ValueError("histogram_bins must be >= 2")
        unknown = [m for m in self.metrics if m not in METRICS]
        if unknown:
            raise ValueError(f"unknown metrics {unknown}; choose from {list(METRICS)}")
        enhanced.check_rho(self.rho)
        for fam in self.families:
            FamilySpec(fam, self.k, self.n)

    def edges(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.histogram_bins + 1)


@dataclass
class MetricHistogram:
    metric: str
    family: str
    bin_edges: np.ndarray
    counts: np.ndarray
    undefined_count: int
    summary: dict[str, float] = field(default_factory=dict)

    @property
    def replicates(self) -> int:
        return int(self.counts.sum()) + self.undefined_count


def bin_index(values: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """A value on an interior edge goes to the bin above it; 1.0 goes to the last bin."""
    idx = np.searchsorted(edges, values, side="right") - 1
    return np.clip(idx, 0, len(edges) - 2)


def _score_chunk(args) -> tuple[np.ndarray, np.ndarray]:
    family, k, n, seed, start, stop, metrics, rho = args
    spec = FamilySpec(Family(family), k, n)
    values = np.zeros((stop - start, len(metrics)))
    defined = np.zeros((stop - start, len(metrics)), dtype=bool)
    for i, rep in enumerate(range(start, stop)):
        cm = generate(spec, rep, seed)
        for j, name in enumerate(metrics):
            s = METRICS[name](cm, rho)
            values[i, j] = s.value
            defined[i, j] = s.defined
    return values, defined


def score_replicates(config: ExperimentConfig, family: Family,
                     workers: int = 1, chunk_size: int = 250) -> tuple[np.ndarray, np.ndarray]:
    """Per-replicate scores (replicates x metrics) and their defined flags."""
    bounds = list(range(0, config.replicates, chunk_size)) + [config.replicates]
    jobs = [(family.value, config.k, config.n, config.master_seed, lo, hi,
             config.metrics, config.rho) for lo, hi in zip(bounds[:-1], bounds[1:])]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_score_chunk, jobs))
    else:
        parts = [_score_chunk(j) for j in jobs]
    return (np.concatenate([p[0] for p in parts]),
            np.concatenate([p[1] for p in parts]))


def _summary(values: np.ndarray) -> dict[str, float]:
    if values.size == 0:
        return {}
    return {
        "min": float(values.min()),
        "max": float(values.max()),
        "mean": math.fsum(values.tolist()) / values.size,
        "median": float(np.median(values)),
    }


def histograms_from_scores(config: ExperimentConfig, family: Family,
                           values: np.ndarray, defined: np.ndarray) -> list[MetricHistogram]:
    edges = config.edges()
    out = []
    for j, name in enumerate(config.metrics):
        v = values[defined[:, j], j]
        counts = np.bincount(bin_index(v, edges), minlength=config.histogram_bins)
        out.append(MetricHistogram(
            metric=name,
            family=family.value,
            bin_edges=edges,
            counts=counts,
            undefined_count=int((~defined[:, j]).sum()),
            summary=_summary(v),
        ))
    return out


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[MetricHistogram]:
    result = []
    for family in config.families:
        values, defined = score_replicates(config, family, workers=workers)
        result.extend(histograms_from_scores(config, family, values, defined))
    return result


def score_matrix(cm: ConfusionMatrix, rho: float = enhanced.DEFAULT_RHO,
                 weights: Sequence[float] | None = None) -> dict[str, Score]:
    """Every applicable metric for one matrix (binary extras when K = 2)."""
    rho = enhanced.check_rho(rho)
    panel = {name: fn(cm, rho) for name, fn in METRICS.items()}
    if weights is not None:
        panel["MPC1"] = multinary.mpc1(cm, weights)
        panel["EMPC1"] = enhanced.empc1(cm, weights)
        panel["EMPC1_rho"] = enhanced.empc1_rho(cm, rho, weights)
    if cm.k == 2:
        bc = binary_counts(cm)
        panel["MCC"] = binary.mcc(bc)
        panel["F1"] = binary.f1(bc)
        panel["Accuracy"] = binary.accuracy(bc)
    return panel


def score_file(path, rho: float = enhanced.DEFAULT_RHO, weights=None,
               transpose: bool = False) -> dict[str, Score]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc
    cm = parse_confusion_matrix(text)
    if transpose:
        cm = cm.transpose()
    return score_matrix(cm, rho, weights)


def panel_to_json(panel: dict[str, Score], rho: float | None = None) -> str:
    doc = {
        name.lower(): _round12(s.value) for name, s in panel.items()
    }
    doc["defined"] = {name.lower(): s.defined for name, s in panel.items()}
    warnings = sorted({w for s in panel.values() for w in s.warnings})
    if warnings:
        doc["warnings"] = warnings
    if rho is not None:
        doc["rho"] = _round12(rho)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def histograms_to_csv(histograms: Sequence[MetricHistogram]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "metric", "bin_lo", "bin_hi", "count"])
    for h in histograms:
        for lo, hi, c in zip(h.bin_edges[:-1], h.bin_edges[1:], h.counts):
            w.writerow([h.family, h.metric, _fmt(lo), _fmt(hi), int(c)])
    return buf.getvalue()


def histograms_to_json(histograms: Sequence[MetricHistogram],
                       config: ExperimentConfig | None = None) -> str:
    doc: dict = {}
    for h in histograms:
        doc.setdefault(h.family, {})[h.metric] = {
            "bin_edges": [_round12(e) for e in h.bin_edges],
            "counts": [int(c) for c in h.counts],
            "undefined_count": h.undefined_count,
            "summary": {k: _round12(v) for k, v in h.summary.items()},
        }
    if config is not None:
        doc = {
            "config": {
                "families": [f.value for f in config.families],
                "replicates": config.replicates,
                "metrics": list(config.metrics),
                "rho": _round12(config.rho),
                "master_seed": config.master_seed,
                "histogram_bins": config.histogram_bins,
                "k": config.k,
                "n": config.n,
            },
            "results": doc,
        }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def emit(result, fmt: str = "json", destination=None, config: ExperimentConfig | None = None) -> bytes:
    """Serialise histograms or a score panel; write to ``destination`` if given."""
    if isinstance(result, dict):
        if fmt == "json":
            text = panel_to_json(result)
        elif fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["metric", "value", "defined"])
            for name in sorted(result):
                w.writerow([name, _fmt(result[name].value), str(result[name].defined).lower()])
            text = buf.getvalue()
        else:
            raise ValueError(f"unknown format {fmt!r}")
    elif fmt == "csv":
        text = histograms_to_csv(result)
    elif fmt == "json":
        text = histograms_to_json(result, config)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    data = text.encode("utf-8")
    if destination is not None:
        path = Path(destination)
        try:
            path.write_bytes(data)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return data
