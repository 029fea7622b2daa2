"""Brute-force ground truth by enumerating every graph on ``n <= 5`` vertices.

Nothing here reuses the fast paths of the other modules: neighbourhood
probabilities are plain products over edges, coupling weights are literal
sums over subsets, and laws are tallied graph by graph.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Hashable, Iterable, Mapping

import numpy as np

from .errors import DegenerateError, EnumerationLimitError
from .graph_core import EdgeProbabilityMatrix, Graph

MAX_N = 5
MAX_COUPLING_N = 4


@dataclass(frozen=True)
class FiniteLaw:
    """A probability law on finitely many hashable outcomes."""

    support: tuple[Hashable, ...]
    probs: tuple[float, ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Hashable, float]]) -> "FiniteLaw":
        acc: dict[Hashable, float] = defaultdict(float)
        for value, w in pairs:
            acc[_canonical(value)] += float(w)
        keys = sorted(acc, key=repr)
        return cls(tuple(keys), tuple(acc[k] for k in keys))

    def as_dict(self) -> dict[Hashable, float]:
        return dict(zip(self.support, self.probs))

    def prob(self, value: Any) -> float:
        return self.as_dict().get(_canonical(value), 0.0)

    def total(self) -> float:
        return math.fsum(self.probs)

    def expect(self, fn: Callable[[Any], float]) -> float:
        return math.fsum(p * fn(x) for x, p in zip(self.support, self.probs))

    def map(self, fn: Callable[[Any], Hashable]) -> "FiniteLaw":
        return FiniteLaw.from_pairs((fn(x), p) for x, p in zip(self.support, self.probs))

    def condition(self, event: Callable[[Any], bool]) -> "FiniteLaw":
        kept = [(x, p) for x, p in zip(self.support, self.probs) if event(x)]
        mass = math.fsum(p for _, p in kept)
        if mass <= 0.0:
            raise DegenerateError("conditioning on an event of probability 0")
        return FiniteLaw.from_pairs((x, p / mass) for x, p in kept)


def _canonical(value: Any) -> Hashable:
    if isinstance(value, np.ndarray):
        return tuple(value.tolist())
    if isinstance(value, (np.integer, np.floating)):
        return value.item()
    if isinstance(value, list):
        return tuple(_canonical(x) for x in value)
    return value


def tv_distance(a: FiniteLaw | Mapping[Hashable, float], b: FiniteLaw | Mapping[Hashable, float]) -> float:
    """``sup_B |a(B) - b(B)|``, i.e. half the L1 distance over the union support."""
    da = a.as_dict() if isinstance(a, FiniteLaw) else dict(a)
    db = b.as_dict() if isinstance(b, FiniteLaw) else dict(b)
    keys = set(da) | set(db)
    return 0.5 * math.fsum(abs(da.get(k, 0.0) - db.get(k, 0.0)) for k in keys)


# -- graph enumeration --------------------------------------------------------


def _slots(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(1, n + 1), 2))


def _check_size(kernel: EdgeProbabilityMatrix, limit: int) -> None:
    if kernel.n > limit:
        raise EnumerationLimitError(f"exhaustive enumeration is limited to n <= {limit}, got n={kernel.n}")


@lru_cache(maxsize=16)
def _graph_table(kernel: EdgeProbabilityMatrix) -> tuple[tuple[Graph, ...], tuple[float, ...]]:
    slots = _slots(kernel.n)
    graphs, weights = [], []
    for bits in itertools.product((0, 1), repeat=len(slots)):
        w = 1.0
        for (a, b), on in zip(slots, bits):
            p = kernel.p[a - 1, b - 1]
            w *= p if on else 1.0 - p
        if w == 0.0:
            continue
        graphs.append(Graph(kernel.n, tuple(e for e, on in zip(slots, bits) if on)))
        weights.append(w)
    return tuple(graphs), tuple(weights)


def graph_law(kernel: EdgeProbabilityMatrix, limit: int = MAX_N) -> FiniteLaw:
    _check_size(kernel, limit)
    graphs, weights = _graph_table(kernel)
    return FiniteLaw(graphs, weights)


def enumerate_statistic_law(
    kernel: EdgeProbabilityMatrix, statistic: Callable[[Graph], Any], limit: int = MAX_N
) -> FiniteLaw:
    _check_size(kernel, limit)
    graphs, weights = _graph_table(kernel)
    return FiniteLaw.from_pairs((statistic(g), w) for g, w in zip(graphs, weights))


def degrees_of(g: Graph) -> tuple[int, ...]:
    return tuple(len(s) for s in g.neighbours)


def counts_of(g: Graph) -> tuple[int, ...]:
    w = [0] * g.n
    for d in degrees_of(g):
        w[d] += 1
    return tuple(w)


def count_covariance(kernel: EdgeProbabilityMatrix, degrees: Iterable[int]) -> np.ndarray:
    """Exact covariance matrix of ``(W_{d_1}, ..., W_{d_p})``."""
    degrees = list(degrees)
    law = enumerate_statistic_law(kernel, lambda g: tuple(counts_of(g)[d] for d in degrees))
    x = np.array(law.support, dtype=float)
    w = np.array(law.probs)
    mean = w @ x
    centred = x - mean
    return (centred * w[:, None]).T @ centred


# -- literal coupling weights -------------------------------------------------


def neighbourhood_prob(kernel: EdgeProbabilityMatrix, v: int, nbrs: Iterable[int]) -> float:
    """``P(N(v) = nbrs)`` as a product over the edges at ``v``."""
    nbrs = set(nbrs)
    out = 1.0
    for u in range(1, kernel.n + 1):
        if u == v:
            continue
        p = kernel.p[v - 1, u - 1]
        out *= p if u in nbrs else 1.0 - p
    return out


def degree_prob(kernel: EdgeProbabilityMatrix, v: int, i: int) -> float:
    others = [u for u in range(1, kernel.n + 1) if u != v]
    return math.fsum(neighbourhood_prob(kernel, v, s) for s in itertools.combinations(others, i))


def _subsets(pool: Iterable[int], k: int) -> Iterable[frozenset[int]]:
    pool = sorted(pool)
    if not 0 <= k <= len(pool):
        return []
    return (frozenset(c) for c in itertools.combinations(pool, k))


def brute_f_plus(kernel: EdgeProbabilityMatrix, v: int, x_d: Iterable[int], x_i: Iterable[int]) -> float:
    x_d, x_i = frozenset(x_d), frozenset(x_i)
    d, i = len(x_d), len(x_i)
    qvi = degree_prob(kernel, v, i)
    if qvi <= 0.0:
        raise DegenerateError(f"P(D({v}) = {i}) = 0")
    outside = frozenset(range(1, kernel.n + 1)) - x_d - {v}
    total = 0.0
    for j in range(i + 1):
        for y in _subsets(x_i, j):
            for z in _subsets(outside, i - j):
                total += neighbourhood_prob(kernel, v, y | z) / math.comb(d - j, i - j)
    return total / qvi


def brute_f_minus(kernel: EdgeProbabilityMatrix, v: int, x_d: Iterable[int], x_i: Iterable[int]) -> float:
    x_d, x_i = frozenset(x_d), frozenset(x_i)
    n = kernel.n
    d, i = len(x_d), len(x_i)
    qvi = degree_prob(kernel, v, i)
    if qvi <= 0.0:
        raise DegenerateError(f"P(D({v}) = {i}) = 0")
    others = frozenset(range(1, n + 1)) - {v}
    complement = others - x_d
    total = 0.0
    for j in range(i, n):
        for extra in _subsets(others - x_i, j - i):
            y = x_i | extra
            size_z = n - 1 - j + i
            for more in _subsets(others - complement, size_z - len(complement)):
                nbrs = y & (complement | more)
                if len(nbrs) != i:
                    continue
                total += neighbourhood_prob(kernel, v, nbrs) / math.comb(j - d, j - i)
    return total / qvi


def _coupling_moves(kernel: EdgeProbabilityMatrix, v: int, i: int, x_d: frozenset[int]):
    """Every neighbourhood the coupling can give ``v``, with its exact probability."""
    d = len(x_d)
    if d == i:
        return [(x_d, 1.0)]
    if d > i:
        return [(c, brute_f_plus(kernel, v, x_d, c)) for c in _subsets(x_d, i)]
    others = frozenset(range(1, kernel.n + 1)) - x_d - {v}
    return [(x_d | c, brute_f_minus(kernel, v, x_d, x_d | c)) for c in _subsets(others, i - d)]


def _rewire(g: Graph, v: int, nbrs: frozenset[int]) -> Graph:
    kept = [e for e in g.edges if v not in e]
    return Graph(g.n, tuple(kept) + tuple((min(v, u), max(v, u)) for u in nbrs))


def enumerate_coupling_joint(kernel: EdgeProbabilityMatrix, v: int, i: int) -> FiniteLaw:
    """Exact joint law of (input graph, coupled graph) for the target ``(v, i)``."""
    _check_size(kernel, MAX_COUPLING_N)
    if degree_prob(kernel, v, i) <= 0.0:
        raise DegenerateError(f"P(D({v}) = {i}) = 0")
    graphs, weights = _graph_table(kernel)
    moves: dict[frozenset[int], list] = {}
    pairs = []
    for g, w in zip(graphs, weights):
        x_d = g.neighbourhood(v)
        if x_d not in moves:
            moves[x_d] = _coupling_moves(kernel, v, i, x_d)
        for nbrs, f in moves[x_d]:
            if f != 0.0:
                pairs.append(((g, _rewire(g, v, nbrs)), w * f))
    return FiniteLaw.from_pairs(pairs)


def enumerate_coupled_law(kernel: EdgeProbabilityMatrix, v: int, i: int) -> FiniteLaw:
    return enumerate_coupling_joint(kernel, v, i).map(lambda pair: pair[1])


def conditional_graph_law(kernel: EdgeProbabilityMatrix, v: int, i: int) -> FiniteLaw:
    return graph_law(kernel).condition(lambda g: g.degree(v) == i)


def enumerate_size_biased_joint(kernel: EdgeProbabilityMatrix, i: int) -> FiniteLaw:
    """Exact joint law of (G, G^i), the random target drawn as ``q_{v,i} / lambda_i``."""
    q = np.array([degree_prob(kernel, v, i) for v in range(1, kernel.n + 1)])
    lam = q.sum()
    if lam <= 0.0:
        raise DegenerateError(f"lambda for degree {i} is 0")
    pairs = []
    for v in range(1, kernel.n + 1):
        if q[v - 1] == 0.0:
            continue
        law = enumerate_coupling_joint(kernel, v, i)
        pairs.extend((x, p * q[v - 1] / lam) for x, p in zip(law.support, law.probs))
    return FiniteLaw.from_pairs(pairs)


def coupling_moment(kernel: EdgeProbabilityMatrix, degrees: list[int], i: int, j: int, k: int) -> float:
    """Exact ``E|(W^{d_i}_{d_j} - W_{d_j})(W^{d_i}_{d_k} - W_{d_k})|`` (0-based i, j, k)."""
    joint = enumerate_size_biased_joint(kernel, degrees[i])

    def term(pair: tuple[Graph, Graph]) -> float:
        before, after = counts_of(pair[0]), counts_of(pair[1])
        dj, dk = degrees[j], degrees[k]
        return abs((after[dj] - before[dj]) * (after[dk] - before[dk]))

    return joint.expect(term)
