"""Multivariate normal approximation for selected degree counts.

For distinct degrees ``d_1..d_p`` this module evaluates the mean vector
``lambda``, the exact covariance ``Sigma`` of ``(W_{d_1}, ..., W_{d_p})``,
the surrogate covariance ``Sigma_0`` used for standardization, and the
constants of the smooth-test-function error bound.

Conventions: ``q_{v,-1} = 0``; sums written over ``u, v`` run over ordered
pairs ``u != v``; the pair-dependent term ``S(i, j)`` enters the bound
through its maximum over all pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .coupling import SizeBiasCoupling
from .degree_dist import all_degree_pmfs, leave_one_out_pmfs
from .errors import DegenerateError, ValidationError
from .graph_core import EdgeProbabilityMatrix, counts_from_degrees, sample_graph
from .rng import block_seeds, make_rng


@dataclass(frozen=True)
class DegreeSelection:
    degrees: tuple[int, ...]

    def __init__(self, degrees: Iterable[int], n: int | None = None):
        ds = tuple(int(d) for d in degrees)
        if not ds:
            raise ValidationError("select at least one degree")
        if len(set(ds)) != len(ds):
            raise ValidationError(f"degrees must be distinct, got {ds}")
        if min(ds) < 0 or (n is not None and max(ds) > n - 1):
            raise ValidationError(f"degrees {ds} outside 0..{'n-1' if n is None else n - 1}")
        object.__setattr__(self, "degrees", ds)

    def __len__(self) -> int:
        return len(self.degrees)


def _selection(sel: DegreeSelection | Iterable[int], n: int) -> DegreeSelection:
    if isinstance(sel, DegreeSelection):
        return DegreeSelection(sel.degrees, n)
    return DegreeSelection(sel, n)


def _q_at(q: np.ndarray, d: int) -> np.ndarray:
    """Column ``d`` of a pmf table, zero when ``d`` is off the support."""
    if 0 <= d < q.shape[-1]:
        return q[..., d]
    return np.zeros(q.shape[:-1])


@dataclass(frozen=True)
class CovariancePair:
    lam: np.ndarray
    sigma: np.ndarray
    sigma0: np.ndarray
    pbar: np.ndarray


@dataclass(frozen=True)
class NormalBoundReport:
    degrees: tuple[int, ...]
    lam: np.ndarray
    B: np.ndarray
    S: float
    S_pairs: np.ndarray
    tau: float
    bigM: float
    d2_coeff: float
    d3_coeff: float

    def total(self, d2_norm: float, d3_norm: float) -> float:
        if d2_norm < 0 or d3_norm < 0:
            raise ValidationError("derivative norms must be non-negative")
        return self.d2_coeff * d2_norm + self.d3_coeff * d3_norm

    def to_dict(self) -> dict:
        return {
            "degrees": list(self.degrees),
            "lambda": self.lam.tolist(),
            "B": self.B.tolist(),
            "S": self.S,
            "S_pairs": self.S_pairs.tolist(),
            "tau": self.tau,
            "M": self.bigM,
            "d2_coeff": self.d2_coeff,
            "d3_coeff": self.d3_coeff,
        }


def lambda_vector(kernel: EdgeProbabilityMatrix, sel) -> np.ndarray:
    sel = _selection(sel, kernel.n)
    q = all_degree_pmfs(kernel)
    return np.array([q[:, d].sum() for d in sel.degrees])


def pbar(kernel: EdgeProbabilityMatrix) -> np.ndarray:
    return kernel.p.sum(axis=0) / (kernel.n - 1)


def covariance_exact(kernel: EdgeProbabilityMatrix, sel) -> np.ndarray:
    sel = _selection(sel, kernel.n)
    ds = sel.degrees
    n, k = kernel.n, len(ds)
    q = all_degree_pmfs(kernel)
    qd = np.stack([q[:, d] for d in ds], axis=1)  # (n, k)
    sigma = np.diag(qd.sum(axis=0)) - qd.T @ qd
    # loo[v, w, d] = P(D^{(w)}(v) = d)
    loo = np.stack([leave_one_out_pmfs(kernel, v) for v in range(1, n + 1)])
    adj = np.stack([_q_at(loo, d - 1) for d in ds], axis=-1)  # (v, w, k)
    same = np.stack([_q_at(loo, d) for d in ds], axis=-1)
    off = ~np.eye(n, dtype=bool)
    p = kernel.p
    for a in range(k):
        for b in range(k):
            # vertex v at degree d_a and w at d_b; the second factor swaps roles.
            edge = p * adj[:, :, a] * adj[:, :, b].T
            no_edge = (1.0 - p) * same[:, :, a] * same[:, :, b].T
            indep = np.outer(qd[:, a], qd[:, b])
            sigma[a, b] += (edge + no_edge - indep)[off].sum()
    return sigma


def _q_differences(kernel: EdgeProbabilityMatrix, ds: Sequence[int]) -> np.ndarray:
    """``delta[v, a] = q_{v, d_a - 1} - q_{v, d_a}``."""
    q = all_degree_pmfs(kernel)
    return np.stack([_q_at(q, d - 1) - q[:, d] for d in ds], axis=1)


def covariance_sigma0(kernel: EdgeProbabilityMatrix, sel) -> np.ndarray:
    sel = _selection(sel, kernel.n)
    ds = sel.degrees
    q = all_degree_pmfs(kernel)
    qd = np.stack([q[:, d] for d in ds], axis=1)
    root = np.sqrt(pbar(kernel))
    cross = root @ _q_differences(kernel, ds)  # (k,)
    return np.diag(qd.sum(axis=0)) - qd.T @ qd + np.outer(cross, cross)


def covariances(kernel: EdgeProbabilityMatrix, sel) -> CovariancePair:
    sel = _selection(sel, kernel.n)
    return CovariancePair(
        lambda_vector(kernel, sel), covariance_exact(kernel, sel), covariance_sigma0(kernel, sel), pbar(kernel)
    )


def s_pairs(kernel: EdgeProbabilityMatrix, sel) -> np.ndarray:
    """``S(i, j)`` for every pair of selected degrees."""
    sel = _selection(sel, kernel.n)
    ds = sel.degrees
    p = kernel.p
    pb = pbar(kernel)
    root = np.sqrt(pb)
    delta = np.abs(_q_differences(kernel, ds))
    mismatch = np.abs(p - np.outer(root, root))
    np.fill_diagonal(mismatch, 0.0)
    base = 4.0 * float((p**2).sum())
    k = len(ds)
    out = np.empty((k, k))
    for a in range(k):
        for b in range(k):
            out[a, b] = base + delta[:, a] @ mismatch @ delta[:, b] + float((pb * delta[:, a] * delta[:, b]).sum())
    return out


def heterogeneity_term(kernel: EdgeProbabilityMatrix, sel) -> np.ndarray:
    """The ``|p_wv - sqrt(pbar_v pbar_w)|`` summand of ``S(i, j)``; zero for constant kernels."""
    sel = _selection(sel, kernel.n)
    root = np.sqrt(pbar(kernel))
    mismatch = np.abs(kernel.p - np.outer(root, root))
    np.fill_diagonal(mismatch, 0.0)
    delta = np.abs(_q_differences(kernel, sel.degrees))
    return delta.T @ mismatch @ delta


def tau_value(kernel: EdgeProbabilityMatrix, sel) -> float:
    sel = _selection(sel, kernel.n)
    q = all_degree_pmfs(kernel)
    qd = np.stack([q[:, d] for d in sel.degrees], axis=1)
    denom = float((qd.min(axis=1) * (1.0 - qd.sum(axis=1))).sum())
    if denom <= 0.0:
        raise DegenerateError(
            "sum_v min_i q_{v,d_i} (1 - sum_i q_{v,d_i}) is not positive; the selection is degenerate"
        )
    return denom**-0.5


def big_m(kernel: EdgeProbabilityMatrix) -> float:
    mu = kernel.p.sum(axis=0)
    return max(float(mu.sum()), float((mu**3).sum()))


def b_terms(kernel: EdgeProbabilityMatrix, sel) -> np.ndarray:
    sel = _selection(sel, kernel.n)
    d = np.array(sel.degrees, dtype=float)
    m = big_m(kernel)
    sq = float((kernel.p**2).sum())
    return 128.0 * np.sqrt((10.0 + 6.0 * d**2) * m + (d**2 + 2.0) * sq * (3.0 * m + 1.0))


def bound_components(kernel: EdgeProbabilityMatrix, sel) -> NormalBoundReport:
    sel = _selection(sel, kernel.n)
    lam = lambda_vector(kernel, sel)
    tau = tau_value(kernel, sel)
    B = b_terms(kernel, sel)
    pairs = s_pairs(kernel, sel)
    S = float(pairs.max())
    m = big_m(kernel)
    p = len(sel)
    d = np.array(sel.degrees, dtype=float)
    d2 = p**3 * tau**2 * (float(B.sum()) + S)
    d3 = p**5 / 3.0 * tau**3 * (m + float((lam * (d + 1.0) ** 2).sum()))
    return NormalBoundReport(sel.degrees, lam, B, S, pairs, tau, m, d2, d3)


def mvn_bound(
    report: NormalBoundReport,
    lam: Sequence[float],
    sel,
    d2_norm: float,
    d3_norm: float,
    p: int | None = None,
) -> float:
    """Assemble ``p^3 tau^2 ||D^2 h|| (sum B_i + S) + p^5/3 tau^3 ||D^3 h|| (M + sum lambda_i (d_i+1)^2)``."""
    if d2_norm < 0 or d3_norm < 0:
        raise ValidationError("derivative norms must be non-negative")
    degrees = sel.degrees if isinstance(sel, DegreeSelection) else tuple(sel)
    p = len(degrees) if p is None else p
    lam = np.asarray(lam, dtype=float)
    d = np.array(degrees, dtype=float)
    first = p**3 * report.tau**2 * d2_norm * (float(report.B.sum()) + report.S)
    second = p**5 / 3.0 * report.tau**3 * d3_norm * (report.bigM + float((lam * (d + 1.0) ** 2).sum()))
    return first + second


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    se: float
    reps: int
    samples: np.ndarray = field(repr=False)


def mc_coupling_moment(
    kernel: EdgeProbabilityMatrix, sel, i: int, j: int, k: int, reps: int, seed: int
) -> MomentEstimate:
    """Monte Carlo ``E|(W^{d_i}_{d_j} - W_{d_j})(W^{d_i}_{d_k} - W_{d_k})|``.

    ``i, j, k`` index into the selection (0-based). Each replication draws a
    graph, size-biases it towards degree ``d_i`` and records the product of
    the count changes.
    """
    sel = _selection(sel, kernel.n)
    if reps < 1:
        raise ValidationError("reps must be >= 1")
    ds = sel.degrees
    di, dj, dk = ds[i], ds[j], ds[k]
    coupler = SizeBiasCoupling(kernel)
    coupler.index_law(di)  # raises when lambda_i = 0
    out = np.empty(reps)
    for r, child in enumerate(block_seeds(seed, reps)):
        rng = make_rng(child)
        g = sample_graph(kernel, rng)
        outcome, _ = coupler.size_biased(g, di, rng)
        before = counts_from_degrees((len(s) for s in g.neighbours), kernel.n).w
        after = counts_from_degrees((len(s) for s in outcome.graph.neighbours), kernel.n).w
        out[r] = abs((after[dj] - before[dj]) * (after[dk] - before[dk]))
    se = float(out.std(ddof=1) / math.sqrt(reps)) if reps > 1 else float("inf")
    return MomentEstimate(float(out.mean()), se, reps, out)


def coupling_moment_majorant(kernel: EdgeProbabilityMatrix, sel, i: int) -> float:
    """``2 (d_i + 1)^2 + 2 E D(I)^2`` with ``I`` drawn as ``q_{v,d_i} / lambda_i``."""
    sel = _selection(sel, kernel.n)
    di = sel.degrees[i]
    q = all_degree_pmfs(kernel)[:, di]
    lam = q.sum()
    if lam <= 0.0:
        raise DegenerateError(f"lambda for degree {di} is 0")
    mu = kernel.p.sum(axis=0)
    var = (kernel.p * (1.0 - kernel.p)).sum(axis=0)
    return 2.0 * (di + 1) ** 2 + 2.0 * float((q * (var + mu**2)).sum()) / lam
