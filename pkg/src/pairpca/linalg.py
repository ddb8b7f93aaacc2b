"""Dense symmetric eigendecomposition, low-rank spectral truncation, and the
regularized symmetric-definite generalized eigensolver behind the
hard-uniformity estimators.

All routines are pure functions of their inputs and safe to call from
concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DegenerateCovariance, InvalidInput

# Relative threshold below which a retained eigenvalue of the constraint
# matrix counts as zero; such directions are dropped from the whitened basis
# instead of being blown up through the regularizer.
ZERO_EIG_RTOL = 1e-12

# Default regularizer, relative to the top eigenvalue of the constraint matrix.
DEFAULT_EPS_REL = 1e-10


class SymmetricMatrix:
    """Dense real symmetric matrix, symmetrized on construction.

    Accepts any square array-like; stores ``0.5 * (M + M.T)`` so downstream
    code can rely on exact symmetry.
    """

    __slots__ = ("entries",)

    def __init__(self, entries) -> None:
        arr = np.asarray(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidInput(f"expected a square matrix, got shape {arr.shape}")
        self.entries = 0.5 * (arr + arr.T)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __repr__(self) -> str:  # pragma: no cover
        return f"SymmetricMatrix(dim={self.dim})"


def as_symmetric(m) -> SymmetricMatrix:
    """Coerce an array-like or SymmetricMatrix into a SymmetricMatrix."""
    if isinstance(m, SymmetricMatrix):
        return m
    return SymmetricMatrix(m)


@dataclass(frozen=True)
class EigenDecomposition:
    """Full symmetric eigendecomposition, eigenvalues sorted descending."""

    values: np.ndarray  # (d,), descending
    vectors: np.ndarray  # (d, d), orthonormal columns


@dataclass(frozen=True)
class GeneralizedEigenResult:
    """Solution of the truncated symmetric-definite pencil.

    ``vectors`` holds the retained generalized eigenvectors as columns; the
    effective column count ``r`` can be smaller than ``truncation_rank`` when
    the constraint matrix has rank below the requested truncation.
    """

    values: np.ndarray  # (r,), descending
    vectors: np.ndarray  # (d, r), constraint-orthonormal columns
    eps_used: float
    truncation_rank: int


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    if vectors.size == 0:
        return vectors
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _check_finite(arr: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} contains non-finite entries")


def sym_eig(m) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix, values descending.

    Deterministic up to eigenvalue ties: each eigenvector is flipped so its
    largest-magnitude entry is positive.
    """
    mat = as_symmetric(m).entries
    _check_finite(mat, "matrix")
    values, vectors = np.linalg.eigh(mat)
    values = values[::-1].copy()
    vectors = fix_signs(vectors[:, ::-1])
    return EigenDecomposition(values=values, vectors=vectors)


def top_eigpairs(m, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Top-``j`` eigenpairs (by algebraic value) of a symmetric matrix.

    Returns ``(values, vectors)`` with values descending and sign-fixed
    vectors as columns.  Cheaper than :func:`sym_eig` for small ``j``.
    """
    mat = as_symmetric(m).entries
    _check_finite(mat, "matrix")
    d = mat.shape[0]
    if not 1 <= j <= d:
        raise InvalidInput(f"requested {j} eigenpairs of a {d}x{d} matrix")
    values, vectors = scipy.linalg.eigh(mat, subset_by_index=[d - j, d - 1])
    return values[::-1].copy(), fix_signs(vectors[:, ::-1])


def truncate_rank(m, s: int) -> SymmetricMatrix:
    """Best rank-``s`` spectral approximation: keep the top-``s`` eigenpairs
    (by algebraic value) and zero the rest."""
    sm = as_symmetric(m)
    if not 1 <= s <= sm.dim:
        raise InvalidInput(f"truncation rank {s} out of range for dim {sm.dim}")
    dec = sym_eig(sm)
    vals = dec.values[:s]
    vecs = dec.vectors[:, :s]
    return SymmetricMatrix((vecs * vals) @ vecs.T)


def whitened_pencil(
    cons_values: np.ndarray,
    cons_vectors: np.ndarray,
    project,
    truncation_rank: int,
    eps_rel: float,
) -> GeneralizedEigenResult:
    """Core of the generalized eigensolver, shared by the matrix API and the
    data-space fast paths.

    Parameters
    ----------
    cons_values, cons_vectors:
        Top eigenpairs of the (truncated) constraint matrix, descending.
    project:
        Callable mapping the whitening map R (d x r) to R^T A R for the
        objective matrix A, without requiring A to be materialized.
    """
    if eps_rel < 0:
        raise InvalidInput("eps_rel must be nonnegative")
    if cons_values.size == 0 or cons_values[0] <= 0:
        raise DegenerateCovariance("constraint matrix has no positive variance")
    lam1 = float(cons_values[0])
    keep = cons_values > lam1 * ZERO_EIG_RTOL
    vals = cons_values[keep]
    vecs = cons_vectors[:, keep]
    eps_used = eps_rel * lam1
    whitener = vecs / np.sqrt(vals + eps_used)
    projected = np.asarray(project(whitener))
    projected = 0.5 * (projected + projected.T)
    values, coords = np.linalg.eigh(projected)
    values = values[::-1].copy()
    # Multiply before reversing: a negative-stride operand would push the
    # matmul off the BLAS fast path.
    vectors = fix_signs((whitener @ coords)[:, ::-1])
    return GeneralizedEigenResult(
        values=values,
        vectors=vectors,
        eps_used=eps_used,
        truncation_rank=truncation_rank,
    )


def generalized_eig(
    s_plus, s, truncation_rank: int, eps_rel: float = DEFAULT_EPS_REL
) -> GeneralizedEigenResult:
    """Solve the pencil ``S_plus v = lambda S v`` on the leading spectral
    subspace of ``s``.

    The constraint matrix is replaced by its rank-``truncation_rank``
    approximation; whitening uses ``(values + eps)^(-1/2)`` with
    ``eps = eps_rel * lambda_1(s)``.  Directions whose truncated eigenvalue is
    numerically zero are excluded from the returned basis, so the effective
    number of columns can fall below ``truncation_rank``.
    """
    a = as_symmetric(s_plus)
    b = as_symmetric(s)
    if a.dim != b.dim:
        raise InvalidInput(f"dimension mismatch: {a.dim} vs {b.dim}")
    if not 1 <= truncation_rank <= b.dim:
        raise InvalidInput(
            f"truncation rank {truncation_rank} out of range for dim {b.dim}"
        )
    _check_finite(a.entries, "objective matrix")
    cons_values, cons_vectors = top_eigpairs(b, truncation_rank)
    if cons_values[0] <= 0:
        raise DegenerateCovariance("constraint matrix has no positive variance")

    def project(whitener: np.ndarray) -> np.ndarray:
        return whitener.T @ a.entries @ whitener

    return whitened_pencil(cons_values, cons_vectors, project, truncation_rank, eps_rel)
