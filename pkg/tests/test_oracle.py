import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inhomgraph import oracle
from inhomgraph.errors import EnumerationLimitError
from inhomgraph.graph_core import Graph, ModelSpec, build_kernel, kernel_from_pairs

from conftest import random_kernel


def test_edge_count_law():
    law = oracle.enumerate_statistic_law(kernel_from_pairs(2, {(1, 2): 0.5}), lambda g: len(g.edges))
    assert law.as_dict() == pytest.approx({0: 0.5, 1: 0.5})


def test_degree_law_matches_worked(k3):
    law = oracle.enumerate_statistic_law(k3, lambda g: g.degree(1))
    assert law.as_dict() == pytest.approx({0: 0.24, 1: 0.62, 2: 0.14})


def test_constant_statistic():
    law = oracle.enumerate_statistic_law(build_kernel(ModelSpec("homogeneous", 4, p=0.3)), lambda g: "x")
    assert law.as_dict() == pytest.approx({"x": 1.0})


def test_limit():
    with pytest.raises(EnumerationLimitError):
        oracle.graph_law(build_kernel(ModelSpec("m1", 6)))


def test_coupled_law_examples():
    k = kernel_from_pairs(2, {(1, 2): 0.5})
    assert oracle.enumerate_coupled_law(k, 1, 1).as_dict() == pytest.approx({Graph(2, ((1, 2),)): 1.0})
    k3 = build_kernel(ModelSpec("homogeneous", 3, p=0.4))
    law = oracle.enumerate_coupled_law(k3, 2, 0).as_dict()
    target = oracle.graph_law(k3).condition(lambda g: g.degree(2) == 0).as_dict()
    assert law == pytest.approx(target)


def test_tv_examples():
    assert oracle.tv_distance({0: 0.3, 1: 0.7}, {0: 0.3, 1: 0.7}) == 0.0
    assert oracle.tv_distance({0: 1.0}, {1: 1.0}) == 1.0
    assert oracle.tv_distance({0: 0.9, 1: 0.1}, {0: 0.8, 1: 0.2}) == pytest.approx(0.1)


laws = st.dictionaries(st.integers(0, 5), st.floats(0.01, 1), min_size=1).map(
    lambda d: {k: v / sum(d.values()) for k, v in d.items()}
)


@settings(max_examples=60)
@given(a=laws, b=laws, c=laws)
def test_tv_metric(a, b, c):
    ab = oracle.tv_distance(a, b)
    assert ab == pytest.approx(oracle.tv_distance(b, a))
    assert 0.0 <= ab <= 1.0 + 1e-12
    assert ab <= oracle.tv_distance(a, c) + oracle.tv_distance(c, b) + 1e-12


def test_graph_law_total(rng):
    k = random_kernel(5, rng)
    law = oracle.graph_law(k)
    assert law.total() == pytest.approx(1.0, abs=1e-12)
    assert len(law.support) == 2**10


def test_count_covariance_psd(rng):
    k = random_kernel(4, rng)
    cov = oracle.count_covariance(k, range(4))
    assert np.allclose(cov, cov.T)
    assert np.linalg.eigvalsh(cov).min() >= -1e-12
