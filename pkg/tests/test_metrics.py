"""Principal angles, sin-theta distances, and eigenvalue matching."""

import itertools

import numpy as np
import pytest

from pairpca import InvalidInput, match_to_population, principal_angles, sin_theta_dist


def random_basis(d, k, seed):
    rng = np.random.default_rng(seed)
    return np.linalg.qr(rng.standard_normal((d, k)))[0]


def test_identical_subspaces_have_zero_angles():
    u = random_basis(6, 2, seed=1)
    angles = principal_angles(u, u)
    np.testing.assert_allclose(angles.angles, 0.0, atol=1e-7)
    assert sin_theta_dist(u, u) <= 1e-7


def test_forty_five_degree_plane():
    e1 = np.array([[1.0], [0.0]])
    diag = np.array([[1.0], [1.0]]) / np.sqrt(2)
    angles = principal_angles(e1, diag)
    assert angles.angles[0] == pytest.approx(np.pi / 4, abs=1e-12)
    assert sin_theta_dist(e1, diag) == pytest.approx(0.70711, abs=1e-5)


def test_orthogonal_subspaces():
    e1 = np.eye(3)[:, :1]
    e2 = np.eye(3)[:, 1:2]
    assert sin_theta_dist(e1, e2) == pytest.approx(1.0)


def test_cosines_match_independent_oracle():
    u = random_basis(6, 2, seed=3)
    v = random_basis(6, 2, seed=4)
    got = principal_angles(u, v).cosines
    # Independent route: eigenvalues of (U^T V)(U^T V)^T.
    gram = u.T @ v
    expected = np.sqrt(np.sort(np.linalg.eigvalsh(gram @ gram.T))[::-1])
    np.testing.assert_allclose(got, expected, atol=1e-10)


def test_frobenius_vs_projection_distance():
    u = random_basis(7, 3, seed=5)
    v = random_basis(7, 3, seed=6)
    dist_f = sin_theta_dist(u, v, norm="frobenius")
    proj_gap = np.linalg.norm(u @ u.T - v @ v.T, ord="fro")
    assert proj_gap == pytest.approx(np.sqrt(2) * dist_f, abs=1e-8)


def test_non_orthonormal_input_is_reorthonormalized():
    u = random_basis(5, 2, seed=7)
    v = random_basis(5, 2, seed=8)
    skewed = v @ np.array([[2.0, 0.7], [0.0, 0.3]])  # same span, bad gram
    assert sin_theta_dist(u, skewed) == pytest.approx(sin_theta_dist(u, v), abs=1e-10)


def test_rank_mismatch_flagged():
    u = random_basis(6, 3, seed=9)
    angles = principal_angles(u, u[:, :2])
    assert angles.rank_mismatch
    assert angles.cosines.shape == (2,)


def test_dimension_mismatch_rejected():
    with pytest.raises(InvalidInput):
        principal_angles(random_basis(5, 2, 0), random_basis(6, 2, 0))


def test_unknown_norm_rejected():
    u = random_basis(4, 2, seed=10)
    with pytest.raises(InvalidInput):
        sin_theta_dist(u, u, norm="nuclear")


class TestMatchToPopulation:
    def test_nearest_by_inspection(self):
        assignment = match_to_population([501.2, 10.9, 1.01], [500.0, 10.0])
        assert assignment == {0: 0, 1: 1}

    def test_exact_equality_is_identity(self):
        values = [9.0, 5.0, 2.0]
        assert match_to_population(values, values) == {0: 0, 1: 1, 2: 2}

    def test_matches_exhaustive_pairing_under_small_perturbations(self):
        rng = np.random.default_rng(11)
        population = np.array([40.0, 20.0, 8.0, 3.0])
        min_gap = np.diff(np.sort(population)).min()
        for _ in range(25):
            noise = rng.uniform(-0.49, 0.49, size=4) * min_gap
            sample = population + noise
            order = rng.permutation(4)
            got = match_to_population(sample[order], population)
            # Exhaustive oracle: the permutation minimizing total |mismatch|.
            best = min(
                itertools.permutations(range(4)),
                key=lambda perm: sum(abs(sample[order][list(perm)] - population)),
            )
            assert got == {pop: best[pop] for pop in range(4)}

    def test_too_few_sample_values(self):
        with pytest.raises(InvalidInput):
            match_to_population([1.0], [1.0, 2.0])
