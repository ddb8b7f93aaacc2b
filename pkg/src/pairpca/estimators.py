"""Subspace estimators.

Covers standard PCA, alignment-only contrastive PCA (eigenvectors of the
symmetrized cross-covariance), the hard-uniformity estimator (top generalized
eigenvectors of the contrastive covariance against a rank-truncated sample
covariance), and the baseline adaptations (difference-of-covariances cPCA,
whitened-ratio cPCA++, and standard two-projection CCA).

Estimators that accept raw data matrices switch to exact dual-space (Gram
matrix) computations when the ambient dimension is much larger than the
sample count, so no ``d x d`` matrix is ever materialized in the tall regime.
The dual paths are algebraically identical to the dense ones and are covered
by equivalence tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DegenerateCovariance, InvalidInput, InvalidTruncation
from .linalg import DEFAULT_EPS_REL, SymmetricMatrix, as_symmetric

ORTHONORMAL = "orthonormal"
S_ORTHONORMAL = "s_orthonormal"


@dataclass
class SubspaceEstimate:
    """A d x k basis plus the constraint its columns satisfy.

    ``orthonormal`` bases satisfy ``basis^T basis = I``; ``s_orthonormal``
    bases are orthonormal with respect to the (truncated) sample covariance
    instead.
    """

    basis: np.ndarray
    constraint_tag: str
    method_name: str
    diagnostics: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class CovariancePair:
    """Sample covariance of the first view plus the contrastive covariance."""

    S: SymmetricMatrix
    S_plus: SymmetricMatrix

    @classmethod
    def from_data(cls, x, x_plus) -> "CovariancePair":
        return cls(S=sample_cov(x), S_plus=contrastive_cov(x, x_plus))


def _as_data(x, name: str = "data") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInput(f"{name} must be a nonempty n x d matrix, got shape {arr.shape}")
    return arr


def _spectrum_diagnostics(values, prefix: str) -> dict[str, float]:
    return {f"{prefix}_{i + 1}": float(v) for i, v in enumerate(values)}


def sample_cov(x) -> SymmetricMatrix:
    """Second-moment matrix ``X^T X / n`` (no mean-centering: the pair model
    is zero-mean by construction; center upstream for real data)."""
    arr = _as_data(x)
    return SymmetricMatrix(arr.T @ arr / arr.shape[0])


def contrastive_cov(x, x_plus) -> SymmetricMatrix:
    """Symmetrized cross-covariance ``(X^T X+ + X+^T X) / (2n)``.

    Symmetric by construction but in general indefinite.
    """
    a = _as_data(x)
    b = _as_data(x_plus, "paired data")
    if a.shape != b.shape:
        raise InvalidInput(f"shape mismatch: {a.shape} vs {b.shape}")
    cross = a.T @ b / a.shape[0]
    return SymmetricMatrix(0.5 * (cross + cross.T))


def synthesize_fg_bg(x, x_plus) -> tuple[np.ndarray, np.ndarray]:
    """Synthetic foreground/background views ``(x + x+)/2`` and ``(x - x+)/2``."""
    a = _as_data(x)
    b = _as_data(x_plus, "paired data")
    if a.shape != b.shape:
        raise InvalidInput(f"shape mismatch: {a.shape} vs {b.shape}")
    return 0.5 * (a + b), 0.5 * (a - b)


def _check_k(k: int, d: int) -> None:
    if not 1 <= k <= d:
        raise InvalidInput(f"subspace dimension k={k} out of range for d={d}")


def pca(s, k: int) -> SubspaceEstimate:
    """Top-``k`` eigenvectors (by signed eigenvalue) of a covariance matrix."""
    sm = as_symmetric(s)
    _check_k(k, sm.dim)
    values, vectors = linalg.top_eigpairs(sm, k)
    return SubspaceEstimate(
        basis=vectors,
        constraint_tag=ORTHONORMAL,
        method_name="pca",
        diagnostics=_spectrum_diagnostics(values, "eigenvalue"),
    )


def _top_cov_eigpairs_from_data(x: np.ndarray, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Top-``j`` eigenpairs of ``X^T X / n`` without forming a d x d matrix
    when d > n.

    In the tall regime the nonzero spectrum comes from the n x n Gram matrix
    ``X X^T / n`` with eigenvectors mapped back through ``X^T``; only strictly
    positive eigenvalues are representable there, so fewer than ``j`` pairs
    may be returned.
    """
    n, d = x.shape
    j = min(j, d)
    if d <= n:
        return linalg.top_eigpairs(x.T @ x / n, j)
    gram = x @ x.T / n
    values, coords = np.linalg.eigh(gram)
    values = values[::-1]
    coords = coords[:, ::-1]
    positive = values > max(values[0], 0.0) * linalg.ZERO_EIG_RTOL
    j_eff = min(j, int(np.count_nonzero(positive)))
    if j_eff == 0:
        return values[:0].copy(), np.zeros((d, 0))
    values = values[:j_eff].copy()
    vectors = x.T @ (coords[:, :j_eff] / np.sqrt(n * values))
    return values, linalg.fix_signs(vectors)


def pca_from_data(x, k: int) -> SubspaceEstimate:
    """Standard PCA of one view, equivalent to ``pca(sample_cov(x), k)`` but
    using the Gram-matrix route when d > n."""
    arr = _as_data(x)
    _check_k(k, arr.shape[1])
    values, vectors = _top_cov_eigpairs_from_data(arr, k)
    if vectors.shape[1] < k:
        raise DegenerateCovariance(
            f"sample covariance has rank {vectors.shape[1]} < k={k}"
        )
    return SubspaceEstimate(
        basis=vectors,
        constraint_tag=ORTHONORMAL,
        method_name="pca",
        diagnostics=_spectrum_diagnostics(values, "eigenvalue"),
    )


def _select_by_magnitude(
    values: np.ndarray, vectors: np.ndarray, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """Keep the ``k`` largest-magnitude eigenpairs, returned in descending
    signed order (so reported spectra stay monotone)."""
    picked = np.argsort(-np.abs(values), kind="stable")[:k]
    picked = picked[np.argsort(-values[picked], kind="stable")]
    return values[picked].copy(), vectors[:, picked]


def _top_contrastive_eigpairs(
    x: np.ndarray, x_plus: np.ndarray, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """Top-``k`` eigenpairs of the contrastive covariance by eigenvalue
    magnitude (the selection rule of the reference benchmarks; for a spectrum
    with k dominant positive eigenvalues it coincides with signed ordering).

    Dense route for moderate d.  For d > 2n, uses the identity
    ``S+ = (F^T F - B^T B) / n`` with F, B the synthesized foreground and
    background, whose nonzero spectrum lives on a 2n-dimensional dual space;
    assumes the contrastive spectrum has at least ``k`` nonzero eigenvalues.
    """
    n, d = x.shape
    if d <= 2 * n:
        sp = contrastive_cov(x, x_plus)
        if 2 * k <= d:
            # Disjoint spectrum ends; candidates for the k largest magnitudes.
            top_values, top_vectors = linalg.top_eigpairs(sp, k)
            low_values, low_vectors = linalg.top_eigpairs(-sp.entries, k)
            values = np.concatenate([top_values, -low_values])
            vectors = np.hstack([top_vectors, low_vectors])
        else:
            dec = linalg.sym_eig(sp)
            values, vectors = dec.values, dec.vectors
        return _select_by_magnitude(values, vectors, k)
    fg, bg = synthesize_fg_bg(x, x_plus)
    stacked = np.vstack([fg, bg])  # (2n, d)
    gram = stacked @ stacked.T / n
    w, u = np.linalg.eigh(gram)
    w = w[::-1]
    u = u[:, ::-1]
    positive = w > max(w[0], 0.0) * linalg.ZERO_EIG_RTOL
    r = int(np.count_nonzero(positive))
    if r < k:
        raise DegenerateCovariance(
            f"contrastive spectrum has rank {r} < k={k} in the dual route"
        )
    w = w[:r]
    u = u[:, :r]
    signs = np.concatenate([np.ones(n), -np.ones(n)])
    half = u * np.sqrt(w)  # gram^(1/2) restricted to its range
    pencil = half.T @ (signs[:, None] * half)
    pencil = 0.5 * (pencil + pencil.T)
    values, coords = np.linalg.eigh(pencil)
    values, coords = _select_by_magnitude(values, coords, k)
    vectors = stacked.T @ ((u / np.sqrt(w)) @ coords) / math.sqrt(n)
    return values, linalg.fix_signs(vectors)


def pca_plus(x, x_plus, k: int) -> SubspaceEstimate:
    """Alignment-only contrastive PCA: the ``k`` dominant eigenvectors of the
    contrastive covariance, selected by eigenvalue magnitude and listed in
    descending signed order."""
    a = _as_data(x)
    b = _as_data(x_plus, "paired data")
    if a.shape != b.shape:
        raise InvalidInput(f"shape mismatch: {a.shape} vs {b.shape}")
    _check_k(k, a.shape[1])
    values, vectors = _top_contrastive_eigpairs(a, b, k)
    return SubspaceEstimate(
        basis=vectors,
        constraint_tag=ORTHONORMAL,
        method_name="pca_plus",
        diagnostics=_spectrum_diagnostics(values, "eigenvalue"),
    )


def default_truncation_rank(d: int, k: int) -> int:
    """Library default: ``min(d, max(2k, ceil(0.1 d)))``."""
    return min(d, max(2 * k, math.ceil(0.1 * d)))


def _gep_from_factors(
    cons_data: np.ndarray,
    obj_project,
    s: int,
    eps_rel: float,
) -> linalg.GeneralizedEigenResult:
    """Generalized eigensolve with the constraint spectrum taken from data."""
    cons_values, cons_vectors = _top_cov_eigpairs_from_data(cons_data, s)
    if cons_values.size == 0 or cons_values[0] <= 0:
        raise DegenerateCovariance("constraint covariance has no positive variance")
    return linalg.whitened_pencil(cons_values, cons_vectors, obj_project, s, eps_rel)


def pca_plus_plus(
    x, x_plus, k: int, s: int | None = None, eps_rel: float = DEFAULT_EPS_REL
) -> SubspaceEstimate:
    """Hard-uniformity contrastive PCA.

    Maximizes the contrastive variance subject to identity covariance of the
    projected features, with the sample covariance replaced by its rank-``s``
    approximation for stability; solved as a symmetric-definite generalized
    eigenproblem.  Requires ``k <= s <= d``.
    """
    a = _as_data(x)
    b = _as_data(x_plus, "paired data")
    if a.shape != b.shape:
        raise InvalidInput(f"shape mismatch: {a.shape} vs {b.shape}")
    n, d = a.shape
    _check_k(k, d)
    if s is None:
        s = default_truncation_rank(d, k)
    if s < k:
        raise InvalidTruncation(f"truncation rank s={s} below subspace dimension k={k}")
    if s > d:
        raise InvalidInput(f"truncation rank s={s} exceeds dimension d={d}")
    fg, bg = synthesize_fg_bg(a, b)

    def project(whitener: np.ndarray) -> np.ndarray:
        fw = fg @ whitener
        bw = bg @ whitener
        return (fw.T @ fw - bw.T @ bw) / n

    result = _gep_from_factors(a, project, s, eps_rel)
    if result.vectors.shape[1] < k:
        raise DegenerateCovariance(
            f"only {result.vectors.shape[1]} usable constraint directions for k={k}"
        )
    return SubspaceEstimate(
        basis=result.vectors[:, :k],
        constraint_tag=S_ORTHONORMAL,
        method_name="pca_plus_plus",
        diagnostics=_spectrum_diagnostics(result.values[:k], "gen_eigenvalue"),
    )


def cpca(x_f, x_b, k: int, alpha: float = 1.0) -> SubspaceEstimate:
    """PCA on the covariance difference ``Cov(foreground) - alpha * Cov(background)``.

    ``alpha = 1`` makes the difference an unbiased estimator of the signal
    covariance under the pair model.
    """
    f = _as_data(x_f, "foreground")
    b = _as_data(x_b, "background")
    if f.shape[1] != b.shape[1]:
        raise InvalidInput(f"dimension mismatch: {f.shape[1]} vs {b.shape[1]}")
    _check_k(k, f.shape[1])
    diff = sample_cov(f).entries - alpha * sample_cov(b).entries
    values, vectors = linalg.top_eigpairs(diff, k)
    return SubspaceEstimate(
        basis=vectors,
        constraint_tag=ORTHONORMAL,
        method_name="cpca",
        diagnostics=_spectrum_diagnostics(values, "eigenvalue"),
    )


def cpca_pp(
    x_f, x_b, k: int, s: int | None = None, eps_rel: float = DEFAULT_EPS_REL
) -> SubspaceEstimate:
    """Whitened-ratio contrastive PCA: generalized eigenvectors of the
    foreground covariance against the (optionally truncated) background
    covariance.  Defaults to no truncation, matching the plain
    ``Cov(background)^-1 Cov(foreground)`` formulation."""
    f = _as_data(x_f, "foreground")
    b = _as_data(x_b, "background")
    if f.shape[1] != b.shape[1]:
        raise InvalidInput(f"dimension mismatch: {f.shape[1]} vs {b.shape[1]}")
    d = f.shape[1]
    _check_k(k, d)
    if s is None:
        s = d
    if s < k:
        raise InvalidTruncation(f"truncation rank s={s} below subspace dimension k={k}")
    if s > d:
        raise InvalidInput(f"truncation rank s={s} exceeds dimension d={d}")
    n = f.shape[0]

    def project(whitener: np.ndarray) -> np.ndarray:
        fw = f @ whitener
        return fw.T @ fw / n

    result = _gep_from_factors(b, project, s, eps_rel)
    if result.vectors.shape[1] < k:
        raise DegenerateCovariance(
            f"only {result.vectors.shape[1]} usable background directions for k={k}"
        )
    return SubspaceEstimate(
        basis=result.vectors[:, :k],
        constraint_tag=S_ORTHONORMAL,
        method_name="cpca_pp",
        diagnostics=_spectrum_diagnostics(result.values[:k], "gen_eigenvalue"),
    )


def _whitening_map(cov: np.ndarray, eps_rel: float) -> np.ndarray:
    values, vectors = np.linalg.eigh(cov)
    values = values[::-1]
    vectors = vectors[:, ::-1]
    if values.size == 0 or values[0] <= 0:
        raise DegenerateCovariance("view covariance has no positive variance")
    keep = values > values[0] * linalg.ZERO_EIG_RTOL
    return vectors[:, keep] / np.sqrt(values[keep] + eps_rel * values[0])


def cca_top_k(
    x, x_plus, k: int, eps_rel: float = DEFAULT_EPS_REL, standardize: bool = False
) -> SubspaceEstimate:
    """Standard two-projection CCA between the views; returns the first
    view's projection basis, re-orthonormalized for distance measurement.

    Each view covariance is whitened with the same relative regularizer used
    by the generalized eigensolver; directions with numerically zero variance
    are excluded, and rank below ``k`` on either side raises
    ``DegenerateCovariance``.

    ``standardize`` rescales every coordinate of each view to unit root mean
    square first (no centering) and reports the weights in the rescaled
    coordinates, matching the convention of common CCA implementations; the
    benchmark baselines use this form.  It breaks rotation equivariance, so
    it is off by default.
    """
    a = _as_data(x)
    b = _as_data(x_plus, "paired data")
    if a.shape != b.shape:
        raise InvalidInput(f"shape mismatch: {a.shape} vs {b.shape}")
    n, d = a.shape
    _check_k(k, d)
    if eps_rel < 0:
        raise InvalidInput("eps_rel must be nonnegative")
    if standardize:
        scales = []
        for view in (a, b):
            rms = np.sqrt(np.mean(view**2, axis=0))
            if np.any(rms == 0):
                raise DegenerateCovariance("zero-variance coordinate cannot be standardized")
            scales.append(rms)
        a = a / scales[0]
        b = b / scales[1]
    wx = _whitening_map(a.T @ a / n, eps_rel)
    wy = _whitening_map(b.T @ b / n, eps_rel)
    if wx.shape[1] < k or wy.shape[1] < k:
        raise DegenerateCovariance(
            f"view ranks ({wx.shape[1]}, {wy.shape[1]}) below k={k}"
        )
    cross = wx.T @ (a.T @ b / n) @ wy
    left, correlations, _ = np.linalg.svd(cross)
    basis = np.linalg.qr(wx @ left[:, :k])[0]
    return SubspaceEstimate(
        basis=linalg.fix_signs(basis),
        constraint_tag=ORTHONORMAL,
        method_name="cca",
        diagnostics=_spectrum_diagnostics(correlations[:k], "canonical_correlation"),
    )
