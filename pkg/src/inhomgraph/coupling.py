"""Size-biased coupling for the degree indicators ``1(D(v) = i)``.

Given a graph ``G`` and a target ``(v, i)``, the coupled graph has exactly
the law of ``G`` conditioned on ``D(v) = i``. Only edges at ``v`` move: if
``v`` has too many neighbours an ``i``-subset of them is kept, if too few an
``i``-superset is completed, each chosen with the weights ``f_plus`` /
``f_minus``. Mixing the target vertex over ``P(I = v) = q_{v,i} / lambda_i``
gives the size-biased version of the count ``W_i``.

Candidate subsets are enumerated outright, which is fine while ``C(d, i)``
stays small; a budget guards against accidental blow-ups.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .degree_dist import all_degree_pmfs, bernoulli_sum_pmf
from .errors import DegenerateError, EnumerationLimitError, ValidationError
from .graph_core import EdgeProbabilityMatrix, Graph, check_vertex
from .rng import SeedLike, make_rng

DEFAULT_BUDGET = 10**6
_DRIFT_TOL = 1e-8

Edge = tuple[int, int]


@dataclass(frozen=True)
class GroupedDegreeQuery:
    """Neighbour counts of ``v`` inside three groups partitioning ``V \\ {v}``."""

    v: int
    groups: tuple[frozenset[int], frozenset[int], frozenset[int]]
    counts: tuple[int, int, int]
    i: int


@dataclass(frozen=True)
class CouplingOutcome:
    graph: Graph
    target: tuple[int, int]
    removed: frozenset[Edge]
    added: frozenset[Edge]


@dataclass(frozen=True)
class SizeBiasedIndex:
    degree: int
    vertex: int
    probs: np.ndarray


def _edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


class SizeBiasCoupling:
    """Coupling machinery bound to one kernel, with cached selection laws."""

    def __init__(self, kernel: EdgeProbabilityMatrix, budget: int = DEFAULT_BUDGET):
        self.kernel = kernel
        self.n = kernel.n
        self.budget = budget
        self.q = all_degree_pmfs(kernel)
        self._selection: dict[tuple[int, int, frozenset[int]], tuple[list[frozenset[int]], np.ndarray]] = {}

    # -- exact weights -------------------------------------------------------

    def q_vi(self, v: int, i: int) -> float:
        return float(self.q[v - 1, i]) if 0 <= i < self.n else 0.0

    def _group_pmf(self, v: int, group: Iterable[int]) -> np.ndarray:
        row = self.kernel.row(v)
        return bernoulli_sum_pmf(row[u - 1] for u in sorted(group))

    def _conditioning(self, v: int, i: int) -> float:
        qvi = self.q_vi(v, i)
        if qvi <= 0.0:
            raise DegenerateError(f"P(D({v}) = {i}) = 0; cannot condition on it")
        return qvi

    def grouped_conditional_prob(self, query: GroupedDegreeQuery) -> float:
        v, i = query.v, query.i
        check_vertex(self.n, v)
        a_set, b_set, c_set = query.groups
        everyone = a_set | b_set | c_set
        sizes = len(a_set) + len(b_set) + len(c_set)
        if sizes != len(everyone) or everyone != frozenset(range(1, self.n + 1)) - {v}:
            raise ValidationError("groups must be disjoint and cover every vertex except v")
        for count, group in zip(query.counts, query.groups):
            if not 0 <= count <= len(group):
                raise ValidationError(f"count {count} impossible for a group of size {len(group)}")
        qvi = self._conditioning(v, i)
        if sum(query.counts) != i:
            return 0.0
        joint = 1.0
        for count, group in zip(query.counts, query.groups):
            joint *= self._group_pmf(v, group)[count]
        return joint / qvi

    def f_plus(self, v: int, x_d: Iterable[int], x_i: Iterable[int]) -> float:
        """Weight for keeping ``x_i`` when ``N(v) = x_d`` and ``|x_i| < |x_d|``."""
        x_d, x_i = frozenset(x_d), frozenset(x_i)
        self._check_sets(v, x_d, x_i)
        d, i = len(x_d), len(x_i)
        if not (x_i < x_d and i < d):
            raise ValidationError("f_plus needs x_i a proper subset of x_d")
        qvi = self._conditioning(v, i)
        outside = frozenset(range(1, self.n + 1)) - x_d - {v}
        kept = self._group_pmf(v, x_i)
        dropped = self._group_pmf(v, x_d - x_i)
        rest = self._group_pmf(v, outside)
        total = 0.0
        for j in range(i + 1):
            if i - j >= rest.size:
                continue
            total += kept[j] * dropped[0] * rest[i - j] / math.comb(d - j, i - j)
        return total / qvi

    def f_minus(self, v: int, x_d: Iterable[int], x_i: Iterable[int]) -> float:
        """Weight for completing ``x_d`` to ``x_i`` when ``|x_d| < |x_i|``."""
        x_d, x_i = frozenset(x_d), frozenset(x_i)
        self._check_sets(v, x_d, x_i)
        d, i = len(x_d), len(x_i)
        if not (x_d < x_i and d < i):
            raise ValidationError("f_minus needs x_d a proper subset of x_i")
        qvi = self._conditioning(v, i)
        outside = frozenset(range(1, self.n + 1)) - x_i - {v}
        old = self._group_pmf(v, x_d)
        new = self._group_pmf(v, x_i - x_d)
        rest = self._group_pmf(v, outside)
        total = 0.0
        # a = edges of v kept inside x_d; the other d - a sit outside x_i.
        for a in range(d + 1):
            if d - a >= rest.size:
                continue
            total += old[a] * new[i - d] * rest[d - a] / math.comb(i - a, d - a)
        return total / qvi

    def _check_sets(self, v: int, *sets: frozenset[int]) -> None:
        check_vertex(self.n, v)
        for s in sets:
            for x in s:
                check_vertex(self.n, x)
            if v in s:
                raise ValidationError(f"vertex {v} cannot be its own neighbour")

    # -- sampling ------------------------------------------------------------

    def selection(self, v: int, i: int, x_d: Iterable[int]) -> tuple[list[frozenset[int]], np.ndarray]:
        """Candidate neighbourhoods for ``v`` and their normalized weights."""
        x_d = frozenset(x_d)
        key = (v, i, x_d)
        hit = self._selection.get(key)
        if hit is not None:
            return hit
        d = len(x_d)
        if d == i:
            result: tuple[list[frozenset[int]], np.ndarray] = ([x_d], np.ones(1))
        else:
            if d > i:
                pool: Sequence[int] = sorted(x_d)
                n_cand = math.comb(d, i)
            else:
                pool = sorted(frozenset(range(1, self.n + 1)) - x_d - {v})
                n_cand = math.comb(len(pool), i - d)
            if n_cand > self.budget:
                raise EnumerationLimitError(
                    f"{n_cand} candidate sets for vertex {v}, degree {d} -> {i} exceed budget {self.budget}"
                )
            if d > i:
                cands = [frozenset(c) for c in itertools.combinations(pool, i)]
                weights = np.array([self.f_plus(v, x_d, c) for c in cands])
            else:
                cands = [x_d | frozenset(c) for c in itertools.combinations(pool, i - d)]
                weights = np.array([self.f_minus(v, x_d, c) for c in cands])
            total = weights.sum()
            if abs(total - 1.0) > _DRIFT_TOL:
                raise ArithmeticError(f"selection weights sum to {total!r}, expected 1")
            keep = weights > 0.0
            cands = [c for c, k in zip(cands, keep) if k]
            weights = weights[keep] / weights[keep].sum()
            result = (cands, weights)
        self._selection[key] = result
        return result

    def couple(self, g: Graph, v: int, i: int, seed: SeedLike) -> CouplingOutcome:
        check_vertex(self.n, v)
        if g.n != self.n:
            raise ValidationError(f"graph has {g.n} vertices, kernel has {self.n}")
        self._conditioning(v, i)
        x_d = g.neighbourhood(v)
        if len(x_d) == i:
            return CouplingOutcome(g, (v, i), frozenset(), frozenset())
        cands, weights = self.selection(v, i, x_d)
        rng = make_rng(seed)
        pick = int(np.searchsorted(np.cumsum(weights), rng.random(), side="right"))
        x_i = cands[min(pick, len(cands) - 1)]
        removed = frozenset(_edge(v, x) for x in x_d - x_i)
        added = frozenset(_edge(v, x) for x in x_i - x_d)
        edges = (set(g.edges) - removed) | added
        return CouplingOutcome(Graph(self.n, tuple(edges)), (v, i), removed, added)

    def index_law(self, i: int) -> np.ndarray:
        """``P(I = v) = q_{v,i} / lambda_i`` for ``v = 1..n`` (as a 0-based array)."""
        if not 0 <= i < self.n:
            raise ValidationError(f"degree {i} outside 0..{self.n - 1}")
        col = self.q[:, i]
        lam = col.sum()
        if lam <= 0.0:
            raise DegenerateError(f"lambda for degree {i} is 0; no vertex can have that degree")
        return col / lam

    def size_biased(self, g: Graph, i: int, seed: SeedLike) -> tuple[CouplingOutcome, SizeBiasedIndex]:
        probs = self.index_law(i)
        rng = make_rng(seed)
        pick = int(np.searchsorted(np.cumsum(probs), rng.random(), side="right"))
        v = min(pick, self.n - 1) + 1
        while probs[v - 1] == 0.0:  # float edge case at the top of the cumsum
            v -= 1
        outcome = self.couple(g, v, i, rng)
        return outcome, SizeBiasedIndex(i, v, probs)


def grouped_conditional_prob(kernel: EdgeProbabilityMatrix, query: GroupedDegreeQuery) -> float:
    return SizeBiasCoupling(kernel).grouped_conditional_prob(query)


def f_plus(kernel: EdgeProbabilityMatrix, v: int, x_d: Iterable[int], x_i: Iterable[int]) -> float:
    return SizeBiasCoupling(kernel).f_plus(v, x_d, x_i)


def f_minus(kernel: EdgeProbabilityMatrix, v: int, x_d: Iterable[int], x_i: Iterable[int]) -> float:
    return SizeBiasCoupling(kernel).f_minus(v, x_d, x_i)


def couple_vertex_degree(g: Graph, kernel: EdgeProbabilityMatrix, v: int, i: int, seed: SeedLike) -> CouplingOutcome:
    return SizeBiasCoupling(kernel).couple(g, v, i, seed)


def size_biased_count_graph(
    g: Graph, kernel: EdgeProbabilityMatrix, i: int, seed: SeedLike
) -> tuple[CouplingOutcome, SizeBiasedIndex]:
    return SizeBiasCoupling(kernel).size_biased(g, i, seed)
