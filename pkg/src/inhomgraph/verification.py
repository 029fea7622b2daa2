"""Oracle-backed self checks behind ``inhomgraph verify``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import oracle
from .coupling import SizeBiasCoupling
from .errors import DegenerateError
from .graph_core import EdgeProbabilityMatrix
from .normal_bound import covariance_exact
from .poisson_bound import verify_compound_poisson, verify_poisson_process
from .rng import make_rng


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def random_kernel(n: int, rng: np.random.Generator, high: float = 1.0) -> EdgeProbabilityMatrix:
    upper = np.triu(rng.uniform(0.0, high, size=(n, n)), k=1)
    return EdgeProbabilityMatrix(upper + upper.T)


def check_normalization(kernel: EdgeProbabilityMatrix, tol: float = 1e-10) -> float:
    """Worst deviation from 1 of the summed selection weights over every ``(v, x_d, i)``."""
    coupler = SizeBiasCoupling(kernel)
    n = kernel.n
    worst = 0.0
    for v in range(1, n + 1):
        others = [u for u in range(1, n + 1) if u != v]
        for d in range(n):
            for x_d in itertools.combinations(others, d):
                for i in range(n):
                    if i == d or coupler.q_vi(v, i) <= 0.0:
                        continue
                    if i < d:
                        total = sum(coupler.f_plus(v, x_d, c) for c in itertools.combinations(x_d, i))
                    else:
                        rest = [u for u in others if u not in x_d]
                        total = sum(
                            coupler.f_minus(v, x_d, set(x_d) | set(c))
                            for c in itertools.combinations(rest, i - d)
                        )
                    worst = max(worst, abs(total - 1.0))
    return worst


def check_coupling(kernel: EdgeProbabilityMatrix) -> float:
    """Worst pointwise gap between the coupled law and the conditional law."""
    worst = 0.0
    for v in range(1, kernel.n + 1):
        for i in range(kernel.n):
            try:
                coupled = oracle.enumerate_coupled_law(kernel, v, i).as_dict()
            except DegenerateError:
                continue
            target = oracle.conditional_graph_law(kernel, v, i).as_dict()
            for g in set(coupled) | set(target):
                worst = max(worst, abs(coupled.get(g, 0.0) - target.get(g, 0.0)))
    return worst


def check_covariance(kernel: EdgeProbabilityMatrix) -> float:
    degrees = list(range(kernel.n))
    return float(np.abs(covariance_exact(kernel, degrees) - oracle.count_covariance(kernel, degrees)).max())


def check_poisson(kernel: EdgeProbabilityMatrix) -> float:
    """Smallest margin ``bound - TV`` over both Poisson statements and every ``M >= 1``."""
    margin = float("inf")
    for M in range(1, kernel.n):
        for report in (verify_poisson_process(kernel, M), verify_compound_poisson(kernel, M)):
            margin = min(margin, report.bound - report.tv - report.slack)
    return margin


SUITES: dict[str, tuple[Callable[[EdgeProbabilityMatrix], float], Callable[[float], bool], str]] = {
    "normalization": (check_normalization, lambda x: x <= 1e-10, "max |sum f - 1|"),
    "coupling": (check_coupling, lambda x: x <= 1e-10, "max |P_coupled - P_cond|"),
    "covariance": (check_covariance, lambda x: x <= 1e-10, "max |Sigma - Sigma_oracle|"),
    "poisson": (check_poisson, lambda x: x >= 0.0, "min (bound - TV)"),
}


def run_suite(name: str, n: int, seed: int, kernels: int = 5) -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    if name == "coupling":
        names = ["normalization", "coupling"]
    rng = make_rng(seed)
    pool = [random_kernel(n, rng) for _ in range(kernels)]
    results = []
    for key in names:
        fn, ok, label = SUITES[key]
        values = [fn(k) for k in pool]
        worst = max(values) if key != "poisson" else min(values)
        results.append(CheckResult(key, all(ok(v) for v in values), f"{label} = {worst:.3e} over {kernels} kernels"))
    return results
