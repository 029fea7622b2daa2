"""Poisson process approximation for large degrees.

The indicator field ``{1(D(v) = i) : v in V, i >= M}`` is compared with a
field of independent ``Po(q_{v,i})`` counts, and the truncated degree vector
``(D(v) 1(D(v) >= M))_v`` with independent compound Poisson coordinates
``sum_{i >= M} i Po(q_{v,i})``. Both distances are bounded by
``b1 + b2`` below.

Total variation throughout is ``sup_B |P(B) - Q(B)|``. When ``P`` lives on a
finite set ``S`` this equals ``1/2 (sum_{x in S} |P(x) - Q(x)| + 1 - Q(S))``,
which is exact without truncating ``Q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping

import numpy as np

from .degree_dist import all_degree_pmfs, degree_pmf, tail_prob
from .errors import ValidationError, VerificationError
from .graph_core import EdgeProbabilityMatrix, check_vertex
from .oracle import MAX_N, degrees_of, enumerate_statistic_law

DEFAULT_TAIL_EPS = 1e-12


@dataclass(frozen=True)
class TruncatedIndicatorField:
    """Realization of the field on ``(v, i)``, ``M <= i <= n-1``, stored as its set of ones."""

    n: int
    M: int
    ones: frozenset[tuple[int, int]]

    @classmethod
    def from_degrees(cls, degrees, M: int) -> "TruncatedIndicatorField":
        degrees = tuple(degrees)
        return cls(len(degrees), M, frozenset((v, d) for v, d in enumerate(degrees, start=1) if d >= M))

    def entry(self, v: int, i: int) -> int:
        return int((v, i) in self.ones)

    def degree_sum_map(self) -> tuple[int, ...]:
        """``f(xi) = (sum_i i * xi(v, i))_v``, the truncated degree vector."""
        out = [0] * self.n
        for v, i in self.ones:
            out[v - 1] += i
        return tuple(out)


@dataclass(frozen=True)
class CompoundPoissonLaw:
    v: int
    M: int
    pmf: np.ndarray
    tail_mass: float

    def prob(self, x: int) -> float:
        return float(self.pmf[x]) if 0 <= x < self.pmf.size else 0.0


@dataclass(frozen=True)
class PoissonBoundReport:
    M: int
    b1: float
    b2: float

    @property
    def total(self) -> float:
        return self.b1 + self.b2

    def to_dict(self) -> dict:
        return {"M": self.M, "b1": self.b1, "b2": self.b2, "total": self.total}


@dataclass(frozen=True)
class VerificationReport:
    M: int
    tv: float
    bound: float
    slack: float

    @property
    def holds(self) -> bool:
        return self.tv + self.slack <= self.bound

    def to_dict(self) -> dict:
        return {"M": self.M, "tv": self.tv, "bound": self.bound, "slack": self.slack, "holds": self.holds}


def poisson_process_bound(kernel: EdgeProbabilityMatrix, M: int) -> PoissonBoundReport:
    n = kernel.n
    if isinstance(M, bool) or not 0 <= M <= n - 1:
        raise ValidationError(f"threshold M={M!r} outside 0..{n - 1}")
    q = all_degree_pmfs(kernel)
    tails = np.array([tail_prob(q[v], M) for v in range(n)])
    b1 = float((tails**2).sum())
    b2 = 0.0
    for v in range(1, n + 1):
        if tails[v - 1] == 0.0:
            continue
        for u in range(1, n + 1):
            if u != v:
                b2 += tails[v - 1] * tail_prob(degree_pmf(kernel, u, {v}), M - 1)
    return PoissonBoundReport(M, b1, float(2.0 * b2))


def _poisson_lattice(rate: float, step: int, cap: int) -> np.ndarray:
    """pmf of ``step * Po(rate)`` on ``0..cap``."""
    out = np.zeros(cap + 1)
    if rate == 0.0:
        out[0] = 1.0
        return out
    k = np.arange(cap // step + 1)
    logs = k * math.log(rate) - rate - np.array([math.lgamma(x + 1.0) for x in k])
    out[k * step] = np.exp(logs)
    return out


def compound_poisson_law(
    kernel: EdgeProbabilityMatrix, v: int, M: int, tail_eps: float = DEFAULT_TAIL_EPS, cap: int | None = None
) -> CompoundPoissonLaw:
    """Exact pmf of ``sum_{i=M}^{n-1} i * Po(q_{v,i})`` up to a cap.

    The cap starts at ``n - 1`` (or the given value) and doubles until the
    mass beyond it is below ``tail_eps``; that remainder is returned as
    ``tail_mass``.
    """
    n = kernel.n
    check_vertex(n, v)
    if tail_eps <= 0:
        raise ValidationError("tail_eps must be positive")
    if not 0 <= M <= n - 1:
        raise ValidationError(f"threshold M={M} outside 0..{n - 1}")
    q = degree_pmf(kernel, v).probs
    # i = 0 contributes nothing to the sum.
    steps = [(i, float(q[i])) for i in range(max(M, 1), n) if q[i] > 0.0]
    cap = n - 1 if cap is None else cap
    while True:
        pmf = np.zeros(cap + 1)
        pmf[0] = 1.0
        for i, rate in steps:
            pmf = np.convolve(pmf, _poisson_lattice(rate, i, cap))[: cap + 1]
        tail = max(0.0, 1.0 - math.fsum(pmf))
        if tail < tail_eps:
            pmf.setflags(write=False)
            return CompoundPoissonLaw(v, M, pmf, tail)
        cap *= 2


def field_law(kernel: EdgeProbabilityMatrix, M: int, limit: int = MAX_N):
    return enumerate_statistic_law(kernel, lambda g: TruncatedIndicatorField.from_degrees(degrees_of(g), M), limit)


def truncated_degree_law(kernel: EdgeProbabilityMatrix, M: int, limit: int = MAX_N):
    return enumerate_statistic_law(
        kernel, lambda g: tuple(d if d >= M else 0 for d in degrees_of(g)), limit
    )


def tv_against(law: Mapping[Hashable, float], other_prob: Callable[[Hashable], float]) -> float:
    """TV between a finite law and a second law given pointwise by ``other_prob``."""
    l1 = 0.0
    mass = 0.0
    for x, p in law.items():
        r = other_prob(x)
        l1 += abs(p - r)
        mass += r
    return 0.5 * (l1 + max(0.0, 1.0 - mass))


def poisson_field_prob(q: np.ndarray, M: int, field: TruncatedIndicatorField) -> float:
    """Probability that independent ``Po(q_{v,i})`` counts equal the 0/1 field."""
    total_rate = float(q[:, M:].sum())
    out = math.exp(-total_rate)
    for v, i in field.ones:
        out *= q[v - 1, i]
    return out


def verify_poisson_process(kernel: EdgeProbabilityMatrix, M: int, limit: int = 4) -> VerificationReport:
    law = field_law(kernel, M, limit).as_dict()
    q = all_degree_pmfs(kernel)
    tv = tv_against(law, lambda f: poisson_field_prob(q, M, f))
    return VerificationReport(M, float(tv), float(poisson_process_bound(kernel, M).total), 0.0)


def verify_compound_poisson(
    kernel: EdgeProbabilityMatrix, M: int, tail_eps: float = DEFAULT_TAIL_EPS, limit: int = 4
) -> VerificationReport:
    law = truncated_degree_law(kernel, M, limit).as_dict()
    marginals = [compound_poisson_law(kernel, v, M, tail_eps) for v in range(1, kernel.n + 1)]

    def prob(x: tuple[int, ...]) -> float:
        out = 1.0
        for lawv, xv in zip(marginals, x):
            out *= lawv.prob(xv)
        return out

    # Values of D_M never exceed n-1 <= cap, so each marginal pmf is exact there.
    tv = tv_against(law, prob)
    return VerificationReport(M, float(tv), float(poisson_process_bound(kernel, M).total), 0.0)


def assert_holds(report: VerificationReport) -> VerificationReport:
    if not report.holds:
        raise VerificationError(f"TV {report.tv:.6g} exceeds bound {report.bound:.6g} at M={report.M}")
    return report
