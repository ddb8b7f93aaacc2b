"""Standalone property suites: metric axioms, estimator constraint tags,
rotation equivariance, the theory regime-consistency limit, and exact
recovery in the noiseless model.

Runnable on its own:  pytest tests/test_properties.py
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairpca import (
    FactorModelSpec,
    cca_top_k,
    cpca,
    cpca_pp,
    fixed_aspect_error,
    generate,
    growing_spike_error,
    pca_from_data,
    pca_plus,
    pca_plus_plus,
    principal_angles,
    sample_cov,
    sin_theta_dist,
    synthesize_fg_bg,
    truncate_rank,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_basis(d, k, rng):
    return np.linalg.qr(rng.standard_normal((d, k)))[0]


def random_orthogonal(d, rng):
    return np.linalg.qr(rng.standard_normal((d, d)))[0]


class TestMetricAxioms:
    @settings(max_examples=30, deadline=None)
    @given(seed=seeds, k=st.integers(1, 4))
    def test_symmetry(self, seed, k):
        rng = np.random.default_rng(seed)
        u, v = random_basis(8, k, rng), random_basis(8, k, rng)
        assert abs(sin_theta_dist(u, v) - sin_theta_dist(v, u)) <= 1e-10

    @settings(max_examples=30, deadline=None)
    @given(seed=seeds, k=st.integers(1, 4))
    def test_range(self, seed, k):
        rng = np.random.default_rng(seed)
        u, v = random_basis(9, k, rng), random_basis(9, k, rng)
        assert 0.0 <= sin_theta_dist(u, v) <= 1.0
        assert 0.0 <= sin_theta_dist(u, v, norm="frobenius") <= np.sqrt(k) + 1e-12

    @settings(max_examples=30, deadline=None)
    @given(seed=seeds)
    def test_orthogonal_invariance(self, seed):
        rng = np.random.default_rng(seed)
        u, v = random_basis(7, 3, rng), random_basis(7, 3, rng)
        q = random_orthogonal(7, rng)
        assert abs(sin_theta_dist(q @ u, q @ v) - sin_theta_dist(u, v)) <= 1e-10

    @settings(max_examples=30, deadline=None)
    @given(seed=seeds)
    def test_basis_independence(self, seed):
        rng = np.random.default_rng(seed)
        u, v = random_basis(6, 2, rng), random_basis(6, 2, rng)
        r = random_orthogonal(2, rng)
        before = principal_angles(u, v).angles
        after = principal_angles(u @ r, v).angles
        np.testing.assert_allclose(before, after, atol=1e-10)


SPEC = FactorModelSpec(
    d=14, signal_variances=(12.0, 6.0), background_variances=(30.0, 9.0)
)


def all_estimates(data, s=4, standardize=False):
    fg, bg = synthesize_fg_bg(data.X, data.X_plus)
    return [
        pca_from_data(data.X, 2),
        pca_plus(data.X, data.X_plus, 2),
        pca_plus_plus(data.X, data.X_plus, 2, s=s),
        cpca(fg, bg, 2, alpha=1.0),
        cpca_pp(fg, bg, 2),
        cca_top_k(data.X, data.X_plus, 2, standardize=standardize),
    ]


class TestEstimatorContracts:
    @pytest.mark.parametrize("seed", range(4))
    def test_constraint_tags_hold(self, seed):
        data = generate(SPEC, 80, seed=seed)
        truncated = truncate_rank(sample_cov(data.X), 4).entries
        fg, bg = synthesize_fg_bg(data.X, data.X_plus)
        bg_truncated = truncate_rank(sample_cov(bg), 14).entries
        for est in all_estimates(data):
            gram = est.basis.T @ est.basis
            if est.constraint_tag == "orthonormal":
                assert np.abs(gram - np.eye(2)).max() <= 1e-8, est.method_name
            else:
                constraint = truncated if est.method_name == "pca_plus_plus" else bg_truncated
                s_gram = est.basis.T @ constraint @ est.basis
                assert np.abs(s_gram - np.eye(2)).max() <= 1e-6, est.method_name

    @pytest.mark.parametrize("seed", range(3))
    def test_rotation_equivariance_of_distance(self, seed):
        data = generate(SPEC, 90, seed=100 + seed)
        rng = np.random.default_rng(seed)
        q = random_orthogonal(14, rng)
        rotated_x = data.X @ q.T
        rotated_plus = data.X_plus @ q.T
        truth_rotated = q @ data.truth

        class Rotated:
            X = rotated_x
            X_plus = rotated_plus

        for est, rot in zip(all_estimates(data), all_estimates(Rotated)):
            base = sin_theta_dist(est.basis, data.truth)
            moved = sin_theta_dist(rot.basis, truth_rotated)
            assert abs(base - moved) <= 1e-6, est.method_name

    @pytest.mark.parametrize("seed", range(3))
    def test_diagnostics_are_non_increasing(self, seed):
        data = generate(SPEC, 70, seed=200 + seed)
        for est in all_estimates(data):
            values = [est.diagnostics[key] for key in sorted(est.diagnostics)]
            assert values == sorted(values, reverse=True), est.method_name


class TestTheoryConsistency:
    def test_regimes_agree_for_large_spikes(self):
        for c_a in (0.1, 0.18, 1.0, 3.0):
            fixed_sq = fixed_aspect_error(1e6, c_a * 1e6) ** 2
            assert abs(fixed_sq - growing_spike_error(c_a) ** 2) <= 1e-4

    def test_predictors_stay_in_unit_interval(self):
        grid = np.linspace(0.01, 4.0, 25)
        for c in grid:
            assert 0.0 <= fixed_aspect_error(5.0, c) <= 1.0
            assert 0.0 <= growing_spike_error(c) <= 1.0


class TestExactRecovery:
    @pytest.mark.parametrize("seed", range(3))
    def test_noiseless_model_is_solved_exactly(self, seed):
        spec = FactorModelSpec(d=10, signal_variances=(9.0, 4.0), noise_variance=0.0)
        data = generate(spec, 40, seed=seed)
        for est in (
            pca_plus(data.X, data.X_plus, 2),
            pca_plus_plus(data.X, data.X_plus, 2, s=2),
            cca_top_k(data.X, data.X_plus, 2),
        ):
            assert sin_theta_dist(est.basis, data.truth) <= 1e-6, est.method_name
