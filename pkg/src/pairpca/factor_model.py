"""Synthetic positive-pair generator.

Each observation decomposes into a shared low-dimensional signal, an
independent structured background, and isotropic noise:

    x  = A w + B h  + e
    x+ = A w + B h' + e'

with the signal factor ``w`` shared within a pair and everything else drawn
independently.  Loadings are axis-aligned by default (signal spikes on the
first coordinates, background spikes on the last coordinates in reversed
order), with optional coordinate sharing between chosen signal/background
columns and an optional random rotation applied to everything.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, InvalidSpec
from .linalg import SymmetricMatrix

DISTRIBUTIONS = ("gaussian", "beta22")


@dataclass(frozen=True)
class FactorModelSpec:
    """Dimensions, spike strengths, and sampling options of the pair model.

    ``overlap_pairs`` lists ``(signal_index, background_index)`` pairs
    (0-based) whose loading columns share a coordinate; empty means the
    signal and background blocks are disjoint.
    """

    d: int
    signal_variances: tuple[float, ...]
    background_variances: tuple[float, ...] = ()
    noise_variance: float = 1.0
    overlap_pairs: tuple[tuple[int, int], ...] = ()
    factor_distribution: str = "gaussian"

    def __post_init__(self) -> None:
        object.__setattr__(self, "signal_variances", tuple(float(v) for v in self.signal_variances))
        object.__setattr__(self, "background_variances", tuple(float(v) for v in self.background_variances))
        object.__setattr__(self, "overlap_pairs", tuple((int(i), int(j)) for i, j in self.overlap_pairs))
        if self.d < 1:
            raise InvalidSpec(f"ambient dimension must be positive, got {self.d}")
        for name, variances in (
            ("signal", self.signal_variances),
            ("background", self.background_variances),
        ):
            if any(v <= 0 for v in variances):
                raise InvalidSpec(f"{name} variances must be strictly positive")
            if any(a < b for a, b in zip(variances, variances[1:])):
                raise InvalidSpec(f"{name} variances must be in descending order")
        if self.noise_variance < 0:
            raise InvalidSpec("noise variance must be nonnegative")
        if self.factor_distribution not in DISTRIBUTIONS:
            raise InvalidSpec(f"unknown factor distribution {self.factor_distribution!r}")
        k, m = self.k, self.m
        for i, j in self.overlap_pairs:
            if not (0 <= i < k and 0 <= j < m):
                raise InvalidSpec(f"overlap pair ({i}, {j}) out of range for k={k}, m={m}")
        if not self.overlap_pairs and k + m > self.d:
            raise InvalidSpec(f"k + m = {k + m} exceeds d = {self.d} with disjoint blocks")

    @property
    def k(self) -> int:
        return len(self.signal_variances)

    @property
    def m(self) -> int:
        return len(self.background_variances)


@dataclass(frozen=True)
class Loadings:
    """Signal and background loading matrices; column j of each carries the
    square root of the corresponding spike variance as its norm."""

    A: np.ndarray  # (d, k)
    B: np.ndarray  # (d, m)


@dataclass(frozen=True)
class PairedDataset:
    """The two paired observation matrices plus the ground-truth signal basis."""

    X: np.ndarray  # (n, d)
    X_plus: np.ndarray  # (n, d)
    truth: np.ndarray  # (d, k), orthonormal columns


def _background_coordinates(spec: FactorModelSpec) -> np.ndarray:
    """Coordinate of each background column: overlap pairs sit on their signal
    coordinate, the rest fill the last coordinates in reversed order."""
    overlap = {j: i for i, j in spec.overlap_pairs}
    if len(overlap) != len(spec.overlap_pairs):
        raise InvalidSpec("duplicate background index in overlap pairs")
    coords = np.empty(spec.m, dtype=int)
    for j in range(spec.m):
        coords[j] = overlap.get(j, spec.d - 1 - j)
    taken: set[int] = set()
    for j, coord in enumerate(coords):
        if coord < 0 or coord >= spec.d:
            raise InvalidSpec(f"background column {j} falls outside dimension {spec.d}")
        if coord in taken:
            raise InvalidSpec(f"background columns collide on coordinate {coord}")
        if j not in overlap and coord < spec.k:
            raise InvalidSpec(
                f"background column {j} collides with a signal coordinate; "
                "declare it as an overlap pair or increase d"
            )
        taken.add(int(coord))
    return coords


def build_loadings(spec: FactorModelSpec, rotate_seed: int | None = None) -> Loadings:
    """Construct the loading matrices for a model specification.

    With ``rotate_seed`` set, a uniformly random orthogonal transform is
    applied to both loading blocks (the theory is basis-free; the benchmark
    protocols are axis-aligned).
    """
    a = np.zeros((spec.d, spec.k))
    for i, var in enumerate(spec.signal_variances):
        a[i, i] = np.sqrt(var)
    b = np.zeros((spec.d, spec.m))
    coords = _background_coordinates(spec)
    for j, var in enumerate(spec.background_variances):
        b[coords[j], j] = np.sqrt(var)
    if rotate_seed is not None:
        gauss = np.random.default_rng(rotate_seed).standard_normal((spec.d, spec.d))
        q = np.linalg.qr(gauss)[0]
        a = q @ a
        b = q @ b
    return Loadings(A=a, B=b)


def _standardized_draws(rng: np.random.Generator, shape, distribution: str) -> np.ndarray:
    if distribution == "gaussian":
        return rng.standard_normal(shape)
    if distribution == "beta22":
        # Beta(2,2) has mean 1/2 and variance 1/20.
        return (rng.beta(2.0, 2.0, size=shape) - 0.5) * np.sqrt(20.0)
    raise InvalidInput(f"unknown factor distribution {distribution!r}")


def truth_basis(loadings: Loadings) -> np.ndarray:
    """Orthonormal basis of the signal span (normalized loading columns)."""
    a = loadings.A
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], 0))
    return a / np.linalg.norm(a, axis=0)


def sample_pairs(
    loadings: Loadings,
    n: int,
    noise_variance: float = 1.0,
    distribution: str = "gaussian",
    seed: int = 0,
) -> PairedDataset:
    """Draw ``n`` positive pairs.

    Row ``i`` of both matrices uses one draw of the signal factor; background
    factors and noise are drawn independently per side.  All factors are iid
    with mean 0 and variance 1 under the chosen distribution.  Deterministic
    for a fixed seed.
    """
    if n < 1:
        raise InvalidInput(f"need at least one sample, got n={n}")
    if noise_variance < 0:
        raise InvalidInput("noise variance must be nonnegative")
    d, k = loadings.A.shape
    m = loadings.B.shape[1]
    rng = np.random.default_rng(seed)
    w = _standardized_draws(rng, (n, k), distribution)
    h = _standardized_draws(rng, (n, m), distribution)
    h_plus = _standardized_draws(rng, (n, m), distribution)
    shared = w @ loadings.A.T
    x = shared + h @ loadings.B.T
    x_plus = shared + h_plus @ loadings.B.T
    if noise_variance > 0:
        scale = np.sqrt(noise_variance)
        x = x + scale * _standardized_draws(rng, (n, d), distribution)
        x_plus = x_plus + scale * _standardized_draws(rng, (n, d), distribution)
    return PairedDataset(X=x, X_plus=x_plus, truth=truth_basis(loadings))


def population_covariance(loadings: Loadings, noise_variance: float = 1.0) -> SymmetricMatrix:
    """Population second moment ``A A^T + B B^T + noise_variance * I``."""
    if noise_variance < 0:
        raise InvalidInput("noise variance must be nonnegative")
    d = loadings.A.shape[0]
    cov = loadings.A @ loadings.A.T + loadings.B @ loadings.B.T
    cov[np.diag_indices(d)] += noise_variance
    return SymmetricMatrix(cov)


def generate(
    spec: FactorModelSpec,
    n: int,
    seed: int = 0,
    rotate_seed: int | None = None,
) -> PairedDataset:
    """Convenience wrapper: build loadings from a spec and sample pairs."""
    loadings = build_loadings(spec, rotate_seed=rotate_seed)
    return sample_pairs(
        loadings,
        n,
        noise_variance=spec.noise_variance,
        distribution=spec.factor_distribution,
        seed=seed,
    )
