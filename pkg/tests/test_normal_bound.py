import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inhomgraph import oracle
from inhomgraph.errors import DegenerateError, ValidationError
from inhomgraph.graph_core import EdgeProbabilityMatrix, ModelSpec, build_kernel, kernel_from_pairs
from inhomgraph.linalg import inv_sqrt, jacobi_eigh
from inhomgraph.normal_bound import (
    b_terms,
    bound_components,
    coupling_moment_majorant,
    covariance_exact,
    covariance_sigma0,
    heterogeneity_term,
    lambda_vector,
    mc_coupling_moment,
    mvn_bound,
    tau_value,
)

from conftest import random_kernel

HALF2 = kernel_from_pairs(2, {(1, 2): 0.5})


class TestLambdaAndCovariance:
    def test_lambda(self):
        assert lambda_vector(HALF2, [1]) == pytest.approx([1.0])
        lam0 = 100 * 0.99**99
        assert lambda_vector(build_kernel(ModelSpec("m1", 100)), [0]) == pytest.approx([lam0])
        assert lam0 == pytest.approx(36.973, abs=1e-3)
        assert lambda_vector(kernel_from_pairs(4, {}), [0]) == pytest.approx([4.0])

    def test_sigma_small(self):
        assert covariance_exact(HALF2, [1])[0, 0] == pytest.approx(4 * 0.5 * 0.5)
        assert covariance_exact(kernel_from_pairs(4, {}), [0])[0, 0] == pytest.approx(0.0, abs=1e-15)

    def test_sigma_n3_homogeneous_golden(self):
        k = build_kernel(ModelSpec("homogeneous", 3, p=0.5))
        # Eight equally likely graphs: W0 = 3,1,1,1,0,0,0,0 and W2 = 0,0,0,0,1,1,1,3.
        golden = np.array([[0.9375, -0.5625], [-0.5625, 0.9375]])
        assert np.allclose(oracle.count_covariance(k, [0, 2]), golden, atol=1e-12)
        assert np.allclose(covariance_exact(k, [0, 2]), golden, atol=1e-10)

    def test_sigma_vs_oracle(self, rng):
        for n in (3, 4, 5):
            k = random_kernel(n, rng)
            ds = list(range(n))
            assert np.abs(covariance_exact(k, ds) - oracle.count_covariance(k, ds)).max() <= 1e-10

    def test_sigma0(self):
        assert covariance_sigma0(HALF2, [1])[0, 0] == pytest.approx(0.5)
        assert covariance_sigma0(kernel_from_pairs(3, {}), [0])[0, 0] == pytest.approx(0.0, abs=1e-15)

    def test_heterogeneity_vanishes_for_constant_kernel(self):
        k = build_kernel(ModelSpec("homogeneous", 6, p=0.37))
        assert np.abs(heterogeneity_term(k, [0, 1, 3])).max() <= 1e-15

    def test_selection_validation(self):
        with pytest.raises(ValidationError):
            lambda_vector(HALF2, [2])
        with pytest.raises(ValidationError):
            lambda_vector(HALF2, [])


class TestBoundComponents:
    def test_n2(self):
        rep = bound_components(HALF2, [1])
        assert rep.tau == pytest.approx(math.sqrt(2))
        assert rep.bigM == pytest.approx(1.0)
        assert rep.B[0] == pytest.approx(128 * math.sqrt(22), rel=1e-12)
        assert rep.B[0] == pytest.approx(600.35, abs=0.05)
        # S = 4 sum p^2 (ordered pairs) + 0 + sum_v pbar_v (q_0 - q_1)^2 = 2.
        assert rep.S == pytest.approx(2.0)

    def test_mvn_golden(self):
        rep = bound_components(HALF2, [1])
        hand = 1**3 * 2 * (128 * math.sqrt(22) + 2) + (1 / 3) * 2 * math.sqrt(2) * (1 + 1 * 4)
        assert mvn_bound(rep, rep.lam, [1], 1, 1) == pytest.approx(hand, rel=1e-12)
        assert hand == pytest.approx(1209.4604797, rel=1e-9)
        assert mvn_bound(rep, rep.lam, [1], 0, 0) == 0.0
        assert mvn_bound(rep, rep.lam, [1], 2, 2) == pytest.approx(2 * hand)
        with pytest.raises(ValidationError):
            mvn_bound(rep, rep.lam, [1], -1, 1)

    def test_zero_kernel(self):
        k = kernel_from_pairs(3, {})
        assert np.allclose(b_terms(k, [0]), 0.0)
        with pytest.raises(DegenerateError):
            tau_value(k, [0])

    @settings(max_examples=30, deadline=None)
    @given(n=st.integers(3, 9), seed=st.integers(0, 2**32 - 1))
    def test_tau_identity(self, n, seed):
        k = random_kernel(n, np.random.default_rng(seed), low=0.05, high=0.95)
        ds = [0, 1]
        from inhomgraph.degree_dist import all_degree_pmfs

        q = all_degree_pmfs(k)[:, ds]
        denom = float((q.min(axis=1) * (1 - q.sum(axis=1))).sum())
        assert tau_value(k, ds) ** 2 * denom == pytest.approx(1.0, abs=1e-12)


class TestLinalg:
    def test_examples(self):
        assert np.allclose(inv_sqrt(np.eye(3)), np.eye(3))
        assert np.allclose(inv_sqrt(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]))

    def test_random_spd(self, rng):
        a = rng.normal(size=(5, 5))
        s = a @ a.T + 0.5 * np.eye(5)
        r = inv_sqrt(s)
        assert np.abs(r @ s @ r - np.eye(5)).max() <= 1e-8

    def test_eigh_matches_numpy(self, rng):
        a = rng.normal(size=(6, 6))
        s = a + a.T
        vals, vecs = jacobi_eigh(s)
        assert np.allclose(np.sort(vals), np.linalg.eigvalsh(s))
        assert np.allclose(vecs @ np.diag(vals) @ vecs.T, s)

    def test_errors(self):
        with pytest.raises(ValidationError):
            inv_sqrt(np.array([[1.0, 2.0], [0.0, 1.0]]))
        with pytest.raises(ValidationError):
            inv_sqrt(np.array([[1.0, 2.0], [2.0, 1.0]]))


class TestCouplingMoment:
    def test_forced_degree_is_zero(self):
        n = 4
        k = EdgeProbabilityMatrix(np.ones((n, n)) - np.eye(n))
        est = mc_coupling_moment(k, [n - 1], 0, 0, 0, reps=50, seed=1)
        assert est.mean == 0.0

    def test_matches_enumeration_and_majorant(self):
        k = build_kernel(ModelSpec("homogeneous", 3, p=0.5))
        exact = oracle.coupling_moment(k, [1], 0, 0, 0)
        est = mc_coupling_moment(k, [1], 0, 0, 0, reps=4000, seed=11)
        assert abs(est.mean - exact) <= 4 * est.se
        assert est.mean <= coupling_moment_majorant(k, [1], 0) + 4 * est.se

    def test_random_kernel_majorant(self, rng):
        k = random_kernel(4, rng)
        sel = [1, 2]
        est = mc_coupling_moment(k, sel, 1, 0, 1, reps=1000, seed=3)
        assert est.mean <= coupling_moment_majorant(k, sel, 1) + 4 * est.se
        exact = oracle.coupling_moment(k, sel, 1, 0, 1)
        assert abs(est.mean - exact) <= 4 * est.se + 1e-12


def test_jacobi_wide_spectrum():
    s = np.diag([1e-2, 1.0, 1e2]) + 1e-9 * (np.ones((3, 3)) - np.eye(3))
    r = inv_sqrt(s)
    assert np.abs(r @ s @ r - np.eye(3)).max() <= 1e-8
