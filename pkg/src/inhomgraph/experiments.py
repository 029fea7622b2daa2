"""Simulation harness: degree-count correlations, QQ tables and tail counts."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import ValidationError
from .graph_core import EdgeProbabilityMatrix, ModelSpec, build_kernel, sample_degree_block
from .rng import run_blocks

PRESETS = ("m1", "m2", "m3", "m4")


@dataclass(frozen=True)
class ExperimentConfig:
    spec: ModelSpec
    replications: int
    seed: int
    out_dir: Path | None = None
    threads: int = 1

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ValidationError("replications must be >= 1")
        if self.spec.n < 2:
            raise ValidationError("n must be >= 2")

    @property
    def kernel(self) -> EdgeProbabilityMatrix:
        return build_kernel(self.spec)


@dataclass(frozen=True)
class CorrelationResult:
    """Pearson correlations of ``W_i`` across replications.

    ``degrees`` lists the degree values in the matrix; ``defined[a, b]`` is
    False where either count never varied, and the matrix holds 0 there.
    """

    degrees: tuple[int, ...]
    corr: np.ndarray
    se: np.ndarray
    defined: np.ndarray
    replications: int
    observed: tuple[int, int] | None = None

    def entry(self, i: int, j: int) -> float | None:
        a, b = self.degrees.index(i), self.degrees.index(j)
        return float(self.corr[a, b]) if self.defined[a, b] else None

    def max_offdiag(self) -> float:
        mask = self.defined & ~np.eye(len(self.degrees), dtype=bool)
        return float(np.abs(self.corr[mask]).max()) if mask.any() else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["i", "j", "corr", "se"])
        for a, i in enumerate(self.degrees):
            for b, j in enumerate(self.degrees):
                if self.defined[a, b]:
                    writer.writerow([i, j, repr(float(self.corr[a, b])), repr(float(self.se[a, b]))])
                else:
                    writer.writerow([i, j, "", ""])
        return buf.getvalue()


def sample_counts(kernel: EdgeProbabilityMatrix, reps: int, seed: int, threads: int = 1) -> np.ndarray:
    """Degree-count vectors ``W`` of ``reps`` sampled graphs, shape ``(reps, n)``."""
    n = kernel.n
    blocks = run_blocks(lambda rng, size: sample_degree_block(kernel, rng, size), reps, seed, threads)
    degrees = np.concatenate(blocks)
    rows = np.repeat(np.arange(reps), n)
    return np.bincount(rows * n + degrees.ravel(), minlength=reps * n).reshape(reps, n)


def sample_degrees(kernel: EdgeProbabilityMatrix, reps: int, seed: int, threads: int = 1) -> np.ndarray:
    blocks = run_blocks(lambda rng, size: sample_degree_block(kernel, rng, size), reps, seed, threads)
    return np.concatenate(blocks)


def correlation_matrix(counts: np.ndarray, full_range: bool = False) -> CorrelationResult:
    reps, n = counts.shape
    x = counts.astype(float)
    sd = x.std(axis=0)
    varies = sd > 0
    seen = np.flatnonzero(counts.sum(axis=0))
    observed = (int(seen.min()), int(seen.max())) if seen.size else None
    cols = np.arange(n) if full_range else np.flatnonzero(varies)
    k = cols.size
    corr = np.zeros((k, k))
    defined = np.outer(varies[cols], varies[cols])
    if k:
        sub = x[:, cols]
        centred = sub - sub.mean(axis=0)
        cov = centred.T @ centred / reps
        s = np.where(varies[cols], sd[cols], 1.0)
        corr = np.where(defined, np.clip(cov / np.outer(s, s), -1.0, 1.0), 0.0)
        np.fill_diagonal(corr, np.where(varies[cols], 1.0, 0.0))
    se = (1.0 - corr**2) / math.sqrt(max(reps - 3, 1)) if reps > 3 else np.full((k, k), np.inf)
    se = np.where(defined, se, 0.0)
    return CorrelationResult(tuple(int(c) for c in cols), corr, se, defined, reps, observed)


def run_correlation_experiment(cfg: ExperimentConfig, full_range: bool = False) -> CorrelationResult:
    counts = sample_counts(cfg.kernel, cfg.replications, cfg.seed, cfg.threads)
    result = correlation_matrix(counts, full_range)
    if cfg.out_dir is not None:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"corr_{cfg.spec.variant}_n{cfg.spec.n}.csv").write_text(result.to_csv())
    return result


@dataclass(frozen=True)
class TailTable:
    d: np.ndarray
    z: np.ndarray

    def rows(self) -> list[tuple[int, float, float, float]]:
        return [
            (int(d), float(z), math.log10(d), math.log10(z) if z > 0 else float("-inf"))
            for d, z in zip(self.d, self.z)
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["d", "Z_d", "log10_d", "log10_Z"])
        for d, z, ld, lz in self.rows():
            writer.writerow([d, _num(z), repr(ld), repr(lz)])
        return buf.getvalue()


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def tail_counts(degrees: np.ndarray) -> TailTable:
    """``Z_d`` for ``d = 1..max degree``, averaged over the rows of ``degrees``."""
    degrees = np.atleast_2d(degrees)
    top = int(degrees.max())
    d = np.arange(1, top + 1)
    if top < 1:
        return TailTable(d, np.zeros(0))
    z = np.array([(degrees >= k).sum(axis=1).mean() for k in d])
    return TailTable(d, z)


def run_powerlaw_experiment(cfg: ExperimentConfig) -> TailTable:
    """Tail counts ``Z_d``; with several replications they are averaged."""
    degrees = sample_degrees(cfg.kernel, cfg.replications, cfg.seed, cfg.threads)
    table = tail_counts(degrees)
    if cfg.out_dir is not None:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"powerlaw_{cfg.spec.variant}_n{cfg.spec.n}.csv").write_text(table.to_csv())
    return table


def qq_table(samples: Sequence[float]) -> np.ndarray:
    """Rows ``(normal quantile, standardized order statistic)`` at levels ``(k - 0.5)/R``."""
    x = np.sort(np.asarray(samples, dtype=float))
    sd = x.std(ddof=1) if x.size > 1 else 0.0
    if sd == 0.0:
        raise ValidationError("sample has zero variance; QQ plot undefined")
    levels = (np.arange(1, x.size + 1) - 0.5) / x.size
    return np.column_stack([stats.norm.ppf(levels), (x - x.mean()) / sd])


def qq_data(cfg: ExperimentConfig, degree: int) -> np.ndarray:
    if cfg.replications < 100:
        raise ValidationError("QQ data needs at least 100 replications")
    if not 0 <= degree < cfg.spec.n:
        raise ValidationError(f"degree {degree} outside 0..{cfg.spec.n - 1}")
    counts = sample_counts(cfg.kernel, cfg.replications, cfg.seed, cfg.threads)
    return qq_table(counts[:, degree])


def preset_spec(name: str, n: int) -> ModelSpec:
    if name not in PRESETS:
        raise ValidationError(f"unknown preset {name!r}")
    return ModelSpec(name, n)
