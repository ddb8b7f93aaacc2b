"""Closed-form high-dimensional error predictors and detectability thresholds.

Two asymptotic regimes are covered: a fixed aspect ratio ``c = d/n`` with
constant spike strengths, and a growing-spike regime parameterized by the
effective inverse signal-to-noise ratio ``c_A = d / (n * lambda)`` of the
weakest signal spike.
"""

from __future__ import annotations

import math

from .errors import InvalidInput


def bbp_detectable(lam: float, c: float) -> bool:
    """Whether a spike of strength ``lam`` separates from the noise bulk at
    aspect ratio ``c`` (threshold ``lam >= sqrt(c)``, boundary inclusive)."""
    if lam <= 0 or c <= 0:
        raise InvalidInput("spike strength and aspect ratio must be positive")
    return lam >= math.sqrt(c)


def fixed_aspect_error(
    lambda_a_k: float, c: float, return_detectable: bool = False
):
    """Limiting subspace error of the hard-uniformity estimator at fixed
    aspect ratio ``c = d/n``.

    The squared distance converges to ``1 - (1 - c/lam^2) / (1 + c/lam)``
    for the weakest signal spike ``lam``.  Below the detectability threshold
    the spike is absorbed into the noise bulk, so the prediction is total
    loss (distance 1); set ``return_detectable=True`` to also receive the
    threshold flag.
    """
    if lambda_a_k <= 0 or c < 0:
        raise InvalidInput("spike strength must be positive and c nonnegative")
    detectable = c == 0 or bbp_detectable(lambda_a_k, c)
    if not detectable:
        return (1.0, False) if return_detectable else 1.0
    sq = 1.0 - (1.0 - c / lambda_a_k**2) / (1.0 + c / lambda_a_k)
    value = math.sqrt(min(max(sq, 0.0), 1.0))
    return (value, True) if return_detectable else value


def growing_spike_error(c_a_k: float) -> float:
    """Limiting subspace error in the growing-spike regime: ``sqrt(c/(1+c))``
    of the weakest signal's effective inverse SNR."""
    if c_a_k < 0:
        raise InvalidInput("effective inverse SNR must be nonnegative")
    return math.sqrt(c_a_k / (1.0 + c_a_k))


def pca_plus_alignment_bound(lambda_a_1: float, lambda_b_1: float, c: float) -> float:
    """Upper bound on the squared alignment of the leading alignment-only
    eigenvector with the signal axis under a strong background:
    ``min(1, 2 * lambda_A / sqrt(lambda_B * c))``."""
    if lambda_a_1 <= 0 or lambda_b_1 <= 0 or c <= 0:
        raise InvalidInput("all inputs must be positive")
    return min(1.0, 2.0 * lambda_a_1 / math.sqrt(lambda_b_1 * c))


def finite_sample_bound_shape(
    lambda_a_1: float,
    lambda_a_k: float,
    lambda_b_1: float,
    k: int,
    m: int,
    d: int,
    n: int,
) -> float:
    """Shape of the finite-sample error bound for the alignment-only
    estimator, with the unspecified universal constant fixed at 1.

    Intended for qualitative sweeps and plotted overlays only; it is never
    asserted against simulation output.
    """
    if min(lambda_a_1, lambda_a_k, lambda_b_1) <= 0 or min(k, m, d, n) <= 0:
        raise InvalidInput("all inputs must be positive")
    body = (
        lambda_a_1 * math.sqrt(k / n)
        + lambda_b_1 * math.sqrt(m / n)
        + math.sqrt(lambda_a_1 * lambda_b_1) * math.sqrt(max(k, m) / n)
        + (math.sqrt(lambda_a_1) + math.sqrt(lambda_b_1) + 1.0) * math.sqrt(d / n)
    )
    return body * math.sqrt(math.log(n + d)) / lambda_a_k
