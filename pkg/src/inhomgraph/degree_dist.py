"""Exact Poisson-binomial degree laws and Poisson comparisons.

``D(v)`` is a sum of independent Bernoulli(``p_uv``) edges, so its pmf is the
coefficient vector of ``prod_u (1 - p_uv + p_uv x)``, built here one factor at
a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import stats

from .errors import ValidationError
from .graph_core import EdgeProbabilityMatrix, check_vertex


@dataclass(frozen=True)
class DegreePmf:
    owner: int
    excluded: frozenset[int]
    probs: np.ndarray

    def __len__(self) -> int:
        return self.probs.size

    def __getitem__(self, d: int) -> float:
        """``P(D = d)``, zero outside the support (including ``d = -1``)."""
        return float(self.probs[d]) if 0 <= d < self.probs.size else 0.0


@dataclass(frozen=True)
class DegreeMoments:
    mean: float
    variance: float


def bernoulli_sum_pmf(probs: Iterable[float]) -> np.ndarray:
    """pmf of a sum of independent Bernoulli variables (length ``len(probs) + 1``)."""
    ps = np.asarray(list(probs), dtype=float)
    out = np.zeros(ps.size + 1)
    out[0] = 1.0
    for k, x in enumerate(ps, start=1):
        out[1 : k + 1] = out[1 : k + 1] * (1.0 - x) + out[:k] * x
        out[0] *= 1.0 - x
    total = out.sum()
    if total > 0:
        out /= total
    return out


def degree_pmf(kernel: EdgeProbabilityMatrix, v: int, excluded: Iterable[int] = ()) -> DegreePmf:
    """Law of the degree of ``v`` once the ``excluded`` vertices are deleted."""
    n = kernel.n
    check_vertex(n, v)
    excl = frozenset(int(x) for x in excluded)
    for x in excl:
        check_vertex(n, x)
    if v in excl:
        raise ValidationError(f"vertex {v} cannot be both the owner and excluded")
    keep = [u for u in range(1, n + 1) if u != v and u not in excl]
    row = kernel.row(v)
    probs = bernoulli_sum_pmf(row[u - 1] for u in keep)
    probs.setflags(write=False)
    return DegreePmf(v, excl, probs)


def all_degree_pmfs(kernel: EdgeProbabilityMatrix) -> np.ndarray:
    """Matrix ``q`` with ``q[v - 1, d] = P(D(v) = d)``."""
    return np.vstack([degree_pmf(kernel, v).probs for v in range(1, kernel.n + 1)])


def leave_one_out_pmfs(kernel: EdgeProbabilityMatrix, v: int) -> np.ndarray:
    """``out[w - 1, d] = P(D^{(w)}(v) = d)``: degree of ``v`` with ``w`` deleted.

    Row ``v - 1`` holds the full law of ``D(v)`` padded to length ``n``; every
    other row has support ``0..n-2`` and a trailing zero.
    """
    n = kernel.n
    check_vertex(n, v)
    row = kernel.row(v)
    # One Bernoulli factor per u, skipped in the row that deletes u.
    polys = np.zeros((n, n))
    polys[:, 0] = 1.0
    for k, u in enumerate(x for x in range(n) if x != v - 1):
        x = np.full(n, row[u])
        x[u] = 0.0
        polys[:, 1 : k + 2] = polys[:, 1 : k + 2] * (1.0 - x[:, None]) + polys[:, : k + 1] * x[:, None]
        polys[:, 0] *= 1.0 - x
    polys /= polys.sum(axis=1, keepdims=True)
    return polys


def degree_moments(kernel: EdgeProbabilityMatrix, v: int) -> DegreeMoments:
    row = kernel.row(v)
    return DegreeMoments(float(row.sum()), float((row * (1.0 - row)).sum()))


def poisson_tv_bound(kernel: EdgeProbabilityMatrix, v: int) -> float:
    """Upper bound ``min(1, 1/mu_v) * sum_u p_uv^2`` on ``d_TV(L(D(v)), Po(mu_v))``.

    A vertex with ``mu_v = 0`` has degree identically 0, which equals Po(0),
    so the bound is 0.
    """
    row = kernel.row(v)
    mu = float(row.sum())
    if mu == 0.0:
        return 0.0
    return min(1.0, 1.0 / mu) * float((row**2).sum())


def poisson_pmf(mu: float, size: int) -> np.ndarray:
    """``Po(mu)`` probabilities at ``0..size-1``."""
    k = np.arange(size)
    if mu == 0.0:
        return (k == 0).astype(float)
    return stats.poisson.pmf(k, mu)


def poisson_interval(mu: float, lo: int, hi: int) -> float:
    """``Po(mu){[lo, hi]}``."""
    lo = max(lo, 0)
    if hi < lo:
        return 0.0
    if mu == 0.0:
        return 1.0 if lo == 0 else 0.0
    return float(stats.poisson.cdf(hi, mu) - stats.poisson.cdf(lo - 1, mu))


def tail_prob(pmf: DegreePmf | np.ndarray, M: int) -> float:
    """``P(D >= M)``; any ``M <= 0`` gives 1."""
    probs = pmf.probs if isinstance(pmf, DegreePmf) else np.asarray(pmf)
    if M > probs.size:
        raise ValidationError(f"threshold M={M} beyond support length {probs.size}")
    if M <= 0:
        return 1.0
    return float(min(1.0, probs[M:].sum()))


def poisson_tail_upper_bound(kernel: EdgeProbabilityMatrix, v: int, M: int, halved: bool = False) -> float:
    """Poisson-guided upper bound on ``P(D(v) >= M)``, clipped to 1.

    ``Po(mu_v){[M, n-1]} + c * sum_x p_vx^2``. The default constant
    ``c = min(1, 1/mu_v)`` inherits a proven total-variation bound. With
    ``halved=True`` it is ``(1 - exp(-mu_v)) / (2 mu_v)``; that variant can
    undershoot the true tail (n=2, p=1/2, M=1 gives 0.4016 < 0.5).
    """
    n = kernel.n
    if not 0 <= M <= n - 1:
        raise ValidationError(f"threshold M={M} outside 0..{n - 1}")
    row = kernel.row(v)
    mu = float(row.sum())
    if mu == 0.0:
        return 1.0 if M == 0 else 0.0
    c = (1.0 - math.exp(-mu)) / (2.0 * mu) if halved else min(1.0, 1.0 / mu)
    return min(1.0, poisson_interval(mu, M, n - 1) + c * float((row**2).sum()))


def tv_to_poisson(pmf: DegreePmf | np.ndarray, mu: float) -> float:
    """Exact ``sup_B |P(D in B) - Po(mu)(B)|`` for a finitely supported ``D``."""
    probs = pmf.probs if isinstance(pmf, DegreePmf) else np.asarray(pmf)
    po = poisson_pmf(mu, probs.size)
    # Po mass beyond the support of D counts fully towards the L1 distance.
    beyond = max(0.0, 1.0 - po.sum())
    return 0.5 * (float(np.abs(probs - po).sum()) + beyond)
