import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inhomgraph.degree_dist import (
    bernoulli_sum_pmf,
    degree_moments,
    degree_pmf,
    leave_one_out_pmfs,
    poisson_tail_upper_bound,
    poisson_tv_bound,
    tail_prob,
    tv_to_poisson,
)
from inhomgraph.errors import ValidationError
from inhomgraph.graph_core import ModelSpec, build_kernel, kernel_from_pairs
from inhomgraph.oracle import degree_prob

from conftest import random_kernel


def enumerate_sum(probs):
    """Law of a Bernoulli sum by listing every 0/1 outcome."""
    out = np.zeros(len(probs) + 1)
    for bits in itertools.product((0, 1), repeat=len(probs)):
        w = 1.0
        for b, p in zip(bits, probs):
            w *= p if b else 1 - p
        out[sum(bits)] += w
    return out


class TestDegreePmf:
    def test_binomial(self):
        k = kernel_from_pairs(3, {(1, 2): 0.5, (1, 3): 0.5})
        assert np.allclose(degree_pmf(k, 1).probs, [0.25, 0.5, 0.25])

    def test_worked_example(self, k3):
        expected = enumerate_sum([0.2, 0.7])
        assert np.allclose(expected, [0.24, 0.62, 0.14])
        assert np.allclose(degree_pmf(k3, 1).probs, expected, atol=1e-15)

    def test_excluded(self, k3):
        pmf = degree_pmf(k3, 1, {3})
        assert np.allclose(pmf.probs, [0.8, 0.2])
        assert pmf[5] == 0.0 and pmf[-1] == 0.0

    def test_bad_vertex(self, k3):
        with pytest.raises(ValidationError):
            degree_pmf(k3, 4)
        with pytest.raises(ValidationError):
            degree_pmf(k3, 1, {1})

    @settings(max_examples=40, deadline=None)
    @given(probs=st.lists(st.floats(0, 1), min_size=0, max_size=9))
    def test_dp_matches_enumeration(self, probs):
        assert np.allclose(bernoulli_sum_pmf(probs), enumerate_sum(probs), atol=1e-12)

    def test_leave_one_out_matches_direct(self, rng):
        k = random_kernel(7, rng)
        for v in (1, 4):
            loo = leave_one_out_pmfs(k, v)
            for w in range(1, 8):
                if w == v:
                    continue
                direct = degree_pmf(k, v, {w}).probs
                assert np.allclose(loo[w - 1, : direct.size], direct, atol=1e-13)

    def test_against_graph_enumeration(self, rng):
        k = random_kernel(5, rng)
        for v in range(1, 6):
            pmf = degree_pmf(k, v)
            for i in range(5):
                assert pmf[i] == pytest.approx(degree_prob(k, v, i), abs=1e-12)


class TestMoments:
    def test_m1(self):
        m = degree_moments(build_kernel(ModelSpec("m1", 100)), 1)
        assert m.mean == pytest.approx(0.99)

    def test_n2(self):
        m = degree_moments(kernel_from_pairs(2, {(1, 2): 0.5}), 1)
        assert (m.mean, m.variance) == pytest.approx((0.5, 0.25))

    def test_against_pmf(self, k3):
        m = degree_moments(k3, 1)
        q = degree_pmf(k3, 1).probs
        d = np.arange(q.size)
        assert m.mean == pytest.approx(0.9) == pytest.approx(float(d @ q))
        assert m.variance == pytest.approx(0.37) == pytest.approx(float(d**2 @ q) - float(d @ q) ** 2)

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(2, 12), seed=st.integers(0, 2**32 - 1))
    def test_variance_below_mean(self, n, seed):
        k = random_kernel(n, np.random.default_rng(seed))
        for v in range(1, n + 1):
            m = degree_moments(k, v)
            assert m.variance <= m.mean + 1e-12
            assert degree_pmf(k, v).probs.sum() == pytest.approx(1.0, abs=1e-12)


class TestPoissonTv:
    def test_values(self):
        assert poisson_tv_bound(kernel_from_pairs(2, {(1, 2): 0.5}), 1) == pytest.approx(0.25)
        k = build_kernel(ModelSpec("m1", 100))
        assert poisson_tv_bound(k, 1) == pytest.approx(min(1, 1 / 0.99) * 99e-4)
        assert poisson_tv_bound(kernel_from_pairs(3, {}), 2) == 0.0

    @settings(max_examples=30, deadline=None)
    @given(n=st.integers(2, 10), seed=st.integers(0, 2**32 - 1))
    def test_bound_dominates_exact_tv(self, n, seed):
        k = random_kernel(n, np.random.default_rng(seed))
        for v in range(1, n + 1):
            pmf = degree_pmf(k, v)
            assert tv_to_poisson(pmf, degree_moments(k, v).mean) <= poisson_tv_bound(k, v) + 1e-12


class TestTails:
    def test_tail_prob(self):
        pmf = np.array([0.24, 0.62, 0.14])
        assert tail_prob(pmf, 0) == 1.0
        assert tail_prob(pmf, 1) == pytest.approx(1 - 0.24)
        assert tail_prob(pmf, 3) == 0.0

    def test_safe_and_halved(self):
        k = kernel_from_pairs(2, {(1, 2): 0.5})
        truth = tail_prob(degree_pmf(k, 1), 1)
        assert truth == 0.5
        safe = poisson_tail_upper_bound(k, 1, 1)
        assert safe == pytest.approx(0.5 * math.exp(-0.5) + 0.25, abs=1e-12)
        assert safe == pytest.approx(0.55327, abs=1e-5)
        halved = poisson_tail_upper_bound(k, 1, 1, halved=True)
        assert halved == pytest.approx(0.40163, abs=1e-5)
        assert halved < truth  # the halved constant is not a valid bound here
        assert poisson_tail_upper_bound(k, 1, 0) == 1.0
