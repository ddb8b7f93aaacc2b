"""Principal angles between subspaces and sin-theta distances.

The distance routines accept bases that are only approximately orthonormal
(e.g. uniformity-constrained estimates, which are orthonormal with respect to
a sample covariance rather than the Euclidean inner product); such bases are
re-orthonormalized with a thin QR before angles are computed, since the
angles are a property of the spans.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput

_ORTHO_TOL = 1e-6


@dataclass(frozen=True)
class PrincipalAngleSet:
    """Cosines (descending) and angles (ascending) between two subspaces.

    When the two bases have different column counts only ``min(k, k')``
    angles exist; ``rank_mismatch`` flags that case.
    """

    cosines: np.ndarray
    angles: np.ndarray
    rank_mismatch: bool = False


def _prepared_basis(u) -> np.ndarray:
    arr = np.asarray(u, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise InvalidInput(f"expected a 2-D basis, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("basis contains non-finite entries")
    if arr.shape[1] == 0:
        return arr
    gram = arr.T @ arr
    if np.abs(gram - np.eye(arr.shape[1])).max() > _ORTHO_TOL:
        arr = np.linalg.qr(arr)[0]
    return arr


def principal_angles(u, u_prime) -> PrincipalAngleSet:
    """Principal angles via the singular values of ``U^T U'``."""
    a = _prepared_basis(u)
    b = _prepared_basis(u_prime)
    if a.shape[0] != b.shape[0]:
        raise InvalidInput(f"ambient dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    cosines = np.linalg.svd(a.T @ b, compute_uv=False)
    cosines = np.clip(cosines, 0.0, 1.0)
    return PrincipalAngleSet(
        cosines=cosines,
        angles=np.arccos(cosines),
        rank_mismatch=a.shape[1] != b.shape[1],
    )


def sin_theta_dist(u, u_prime, norm: str = "operator") -> float:
    """Sin-theta subspace distance.

    ``operator`` returns the sine of the largest principal angle (in [0, 1]);
    ``frobenius`` returns ``sqrt(sum_j sin^2 theta_j)`` (in [0, sqrt(k)]).
    """
    angles = principal_angles(u, u_prime)
    sines = np.sqrt(np.clip(1.0 - angles.cosines**2, 0.0, 1.0))
    if norm == "operator":
        return float(sines.max()) if sines.size else 0.0
    if norm == "frobenius":
        return float(np.sqrt(np.sum(sines**2)))
    raise InvalidInput(f"unknown norm {norm!r} (expected 'operator' or 'frobenius')")


def match_to_population(sample_values, population_values) -> dict[int, int]:
    """Greedy nearest-value assignment of sample eigenvalues to population
    eigenvalues.

    Population values are visited in descending order; each takes the
    still-unmatched sample value closest in magnitude.  Returns a map from
    population index to sample index (both into the input orderings).
    """
    sample = np.asarray(sample_values, dtype=float)
    population = np.asarray(population_values, dtype=float)
    if sample.size < population.size:
        raise InvalidInput(
            f"{sample.size} sample values cannot cover {population.size} population values"
        )
    assignment: dict[int, int] = {}
    unmatched = list(range(sample.size))
    for pop_idx in np.argsort(-population):
        best = min(unmatched, key=lambda i: abs(sample[i] - population[pop_idx]))
        assignment[int(pop_idx)] = best
        unmatched.remove(best)
    return assignment
