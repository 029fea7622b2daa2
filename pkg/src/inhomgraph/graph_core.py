"""Edge-probability kernels, graph sampling and degree statistics.

Vertices are labelled ``1..n`` throughout the public API (the M3/M4 presets
are defined in terms of these labels). Internally, row ``k`` of a kernel
matrix belongs to vertex ``k + 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np

from .errors import ValidationError
from .rng import make_rng

MODEL_NAMES = ("m1", "m2", "m3", "m4", "homogeneous", "custom")


@dataclass(frozen=True, eq=False)
class EdgeProbabilityMatrix:
    """Symmetric matrix of edge probabilities with zero diagonal."""

    p: np.ndarray

    def __post_init__(self) -> None:
        p = np.array(self.p, dtype=float, copy=True)
        _check_matrix(p)
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.p.shape[0]

    def prob(self, u: int, v: int) -> float:
        check_vertex(self.n, u)
        check_vertex(self.n, v)
        return float(self.p[u - 1, v - 1])

    def row(self, v: int) -> np.ndarray:
        """Edge probabilities from ``v`` to every vertex (0-based positions)."""
        check_vertex(self.n, v)
        return self.p[v - 1]

    @cached_property
    def pair_index(self) -> tuple[np.ndarray, np.ndarray]:
        """0-based endpoints of the upper-triangle slots in sampling order."""
        return np.triu_indices(self.n, k=1)

    @cached_property
    def pair_probs(self) -> np.ndarray:
        iu, ju = self.pair_index
        return self.p[iu, ju]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EdgeProbabilityMatrix) and np.array_equal(self.p, other.p)

    def __hash__(self) -> int:
        return hash(self.p.tobytes())


def _check_matrix(p: np.ndarray) -> None:
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValidationError(f"kernel must be a square matrix, got shape {p.shape}")
    n = p.shape[0]
    if n < 2:
        raise ValidationError(f"kernel needs n >= 2 vertices, got n={n}")
    with np.errstate(invalid="ignore"):
        bad = ~((p >= 0.0) & (p <= 1.0))
    if bad.any():
        u, v = np.argwhere(bad)[0]
        raise ValidationError(f"entry p[{u + 1}][{v + 1}] = {float(p[u, v])!r} is not a probability")
    diag = np.flatnonzero(np.diag(p) != 0.0)
    if diag.size:
        u = diag[0]
        raise ValidationError(f"diagonal entry p[{u + 1}][{u + 1}] = {float(p[u, u])!r} must be 0")
    asym = np.triu(p != p.T, k=1)
    if asym.any():
        u, v = np.argwhere(asym)[0]
        raise ValidationError(
            f"asymmetric entries p[{u + 1}][{v + 1}] = {p[u, v]!r} vs p[{v + 1}][{u + 1}] = {p[v, u]!r}"
        )


def check_vertex(n: int, v: int) -> None:
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 1 <= v <= n:
        raise ValidationError(f"vertex {v!r} is not a label in 1..{n}")


@dataclass(frozen=True)
class ModelSpec:
    """A named kernel preset with its (overridable) parameters.

    ``variant`` is one of ``m1 m2 m3 m4 homogeneous custom``. Unused fields are
    ignored by the variants that do not need them.
    """

    variant: str
    n: int
    p: float | None = None
    band: int = 10
    p_in: float = 1 / 5
    p_out: float = 1 / 80
    rasch: tuple[float, float] = (3.0, 10.0)
    matrix: Any = None

    @classmethod
    def from_config(cls, cfg: Mapping[str, Any]) -> "ModelSpec":
        model = str(cfg.get("model", "")).lower()
        if model not in MODEL_NAMES:
            raise ValidationError(f"unknown model {cfg.get('model')!r}; expected one of {MODEL_NAMES}")
        matrix = cfg.get("matrix")
        n = cfg.get("n", len(matrix) if matrix is not None else None)
        if n is None:
            raise ValidationError("kernel config needs 'n'")
        kw: dict[str, Any] = {"variant": model, "n": int(n), "matrix": matrix}
        for key in ("p", "p_in", "p_out"):
            if cfg.get(key) is not None:
                kw[key] = float(cfg[key])
        if cfg.get("band") is not None:
            kw["band"] = int(cfg["band"])
        if cfg.get("rasch") is not None:
            a, b = cfg["rasch"]
            kw["rasch"] = (float(a), float(b))
        return cls(**kw)


def build_kernel(spec: ModelSpec) -> EdgeProbabilityMatrix:
    n = spec.n
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise ValidationError(f"n must be an integer >= 2, got {n!r}")
    labels = np.arange(1, n + 1)
    u, v = np.meshgrid(labels, labels, indexing="ij")
    variant = spec.variant.lower()

    if variant == "m1":
        p = np.full((n, n), 1.0 / n)
    elif variant == "homogeneous":
        if spec.p is None:
            raise ValidationError("homogeneous model needs 'p'")
        p = np.full((n, n), float(spec.p))
    elif variant == "m2":
        if spec.band < 0:
            raise ValidationError(f"band must be >= 0, got {spec.band}")
        gap = np.abs(u - v)
        ring = np.minimum(gap, n - gap)
        p = np.where(ring <= spec.band, spec.p_in, spec.p_out)
    elif variant == "m3":
        p = np.minimum(u, v) / n
    elif variant == "m4":
        first, second = spec.rasch
        p = _rasch_alpha(np.minimum(u, v), first, n) * _rasch_alpha(np.maximum(u, v), second, n)
    elif variant == "custom":
        if spec.matrix is None:
            raise ValidationError("custom model needs 'matrix'")
        p = np.asarray(spec.matrix, dtype=float)
        if p.shape != (n, n):
            raise ValidationError(f"custom matrix has shape {p.shape}, expected ({n}, {n})")
        return EdgeProbabilityMatrix(p)
    else:
        raise ValidationError(f"unknown model variant {spec.variant!r}")

    p = np.array(p, dtype=float)
    np.fill_diagonal(p, 0.0)
    return EdgeProbabilityMatrix(p)


def _rasch_alpha(u: np.ndarray, c: float, n: int) -> np.ndarray:
    root = math.sqrt(n)
    return np.where(u <= n / 2, 1.0 / (c * root), c / root)


def load_kernel(source: str | Path | Mapping[str, Any]) -> EdgeProbabilityMatrix:
    """Build a kernel from a JSON config file or an already parsed mapping."""
    if isinstance(source, Mapping):
        cfg = source
    else:
        try:
            cfg = json.loads(Path(source).read_text())
        except json.JSONDecodeError as exc:
            raise ValidationError(f"kernel config {source} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, Mapping):
        raise ValidationError("kernel config must be a JSON object")
    return build_kernel(ModelSpec.from_config(cfg))


def kernel_from_pairs(n: int, probs: Mapping[tuple[int, int], float]) -> EdgeProbabilityMatrix:
    """Kernel with the given ``{(u, v): p}`` entries and zero elsewhere."""
    p = np.zeros((n, n))
    for (a, b), x in probs.items():
        check_vertex(n, a)
        check_vertex(n, b)
        p[a - 1, b - 1] = p[b - 1, a - 1] = x
    return EdgeProbabilityMatrix(p)


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on vertices ``1..n``.

    ``edges`` is kept sorted with ``u < v`` in every pair.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        clean = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            check_vertex(self.n, a)
            check_vertex(self.n, b)
            if a == b:
                raise ValidationError(f"self-loop at vertex {a}")
            clean.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", tuple(sorted(clean)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, tuple(edges))

    @cached_property
    def neighbours(self) -> tuple[frozenset[int], ...]:
        """``neighbours[v - 1]`` is the neighbour set of vertex ``v``."""
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in self.edges:
            adj[a - 1].add(b)
            adj[b - 1].add(a)
        return tuple(frozenset(s) for s in adj)

    def neighbourhood(self, v: int) -> frozenset[int]:
        check_vertex(self.n, v)
        return self.neighbours[v - 1]

    def degree(self, v: int) -> int:
        return len(self.neighbourhood(v))

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.neighbourhood(a)


@dataclass(frozen=True)
class DegreeVector:
    d: tuple[int, ...]


@dataclass(frozen=True)
class DegreeCounts:
    """``w[i]`` vertices have degree ``i``; ``z[k]`` have degree at least ``k``."""

    w: tuple[int, ...]
    z: tuple[int, ...]


def sample_graph(kernel: EdgeProbabilityMatrix, seed: int | np.random.SeedSequence) -> Graph:
    """Draw one graph; pair ``{u, v}`` is present iff its uniform draw is below ``p_uv``.

    Uniforms are consumed in row-major upper-triangle order, so the graph is a
    deterministic function of ``(kernel, seed)``.
    """
    rng = make_rng(seed)
    mask = rng.random(kernel.pair_probs.size) < kernel.pair_probs
    iu, ju = kernel.pair_index
    edges = zip((iu[mask] + 1).tolist(), (ju[mask] + 1).tolist())
    return Graph(kernel.n, tuple(edges))


def sample_degree_block(kernel: EdgeProbabilityMatrix, rng: np.random.Generator, size: int) -> np.ndarray:
    """Degree vectors of ``size`` independent graphs, shape ``(size, n)``.

    Row ``r`` uses the same uniforms ``sample_graph`` would take as its
    ``r``-th consecutive draw from ``rng``.
    """
    n = kernel.n
    probs = kernel.pair_probs
    iu, ju = kernel.pair_index
    out = np.zeros(size * n, dtype=np.int64)
    # Chunked so the uniform buffer stays ~32 MB for n = 1000.
    step = max(1, 4_000_000 // max(1, probs.size))
    for start in range(0, size, step):
        k = min(step, size - start)
        rows, cols = np.nonzero(rng.random((k, probs.size)) < probs)
        rows = rows + start
        out += np.bincount(rows * n + iu[cols], minlength=size * n)
        out += np.bincount(rows * n + ju[cols], minlength=size * n)
    return out.reshape(size, n)


def degree_vector(g: Graph) -> DegreeVector:
    return DegreeVector(tuple(len(s) for s in g.neighbours))


def counts_from_degrees(d: Iterable[int], n: int) -> DegreeCounts:
    w = np.bincount(np.asarray(list(d), dtype=np.int64), minlength=n)
    if w.size > n:
        raise ValidationError(f"degree above n-1={n - 1}")
    z = np.cumsum(w[::-1])[::-1]
    return DegreeCounts(tuple(int(x) for x in w), tuple(int(x) for x in z))


def degree_statistics(g: Graph) -> tuple[DegreeVector, DegreeCounts]:
    dv = degree_vector(g)
    return dv, counts_from_degrees(dv.d, g.n)


def truncate_degrees(d: DegreeVector | Iterable[int], M: int) -> tuple[int, ...]:
    """Zero out every degree below ``M``."""
    values = d.d if isinstance(d, DegreeVector) else tuple(d)
    n = len(values)
    if isinstance(M, bool) or not 0 <= M <= max(n - 1, 0):
        raise ValidationError(f"threshold M={M!r} outside 0..{n - 1}")
    return tuple(x if x >= M else 0 for x in values)
