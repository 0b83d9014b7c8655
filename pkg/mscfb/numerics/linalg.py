import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg as sla

from mscfb.exceptions import (
    DimensionMismatchError,
    NegativeBetaError,
    NonPositiveAlphaError,
    NotPositiveDefiniteError,
    NotSymmetricError,
)

DenseMatrix = NDArray[np.float64]
RealVector = NDArray[np.float64]

SYMMETRY_TOLERANCE = 1e-12


def as_vector(values: ArrayLike, name: str = "vector") -> RealVector:
    """Returns ``values`` as a non-empty 1-D float64 array"""
    vec = np.asarray(values, dtype=np.float64)
    if vec.ndim != 1 or vec.size < 1:
        raise DimensionMismatchError(f"{name} must be a non-empty 1-D array, got shape {vec.shape}")
    return vec


def as_matrix(values: ArrayLike, name: str = "matrix") -> DenseMatrix:
    """Returns ``values`` as a 2-D float64 array with at least one row and column"""
    mat = np.asarray(values, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
        raise DimensionMismatchError(f"{name} must be a non-empty 2-D array, got shape {mat.shape}")
    return mat


def check_symmetric(a: DenseMatrix, tolerance: float = SYMMETRY_TOLERANCE) -> None:
    """Raises NotSymmetricError if max |a_ij - a_ji| exceeds ``tolerance`` relative to max |a_ij|"""
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"Matrix must be square, got shape {a.shape}")
    scale = max(float(np.max(np.abs(a))), 1.0)
    asymmetry = float(np.max(np.abs(a - a.T)))
    if asymmetry > tolerance * scale:
        raise NotSymmetricError(
            f"Matrix is not symmetric: max |a_ij - a_ji| = {asymmetry:.3e} (scale {scale:.3e})"
        )


def symmetrize(a: DenseMatrix) -> DenseMatrix:
    return 0.5 * (a + a.T)


def dot(u: ArrayLike, v: ArrayLike) -> float:
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    if u.shape != v.shape:
        raise DimensionMismatchError(f"Lengths differ: {u.size} != {v.size}")
    return float(np.dot(u, v))


def cholesky_solve(a: ArrayLike, b: ArrayLike) -> RealVector:
    """Solves a.x = b for symmetric positive-definite ``a`` by Cholesky factorization.

    ``a`` is symmetrized before factorizing so accumulation noise below the symmetry tolerance
    does not reach the factor.
    """
    a = as_matrix(a, "a")
    b = as_vector(b, "b")
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"Matrix must be square, got shape {a.shape}")
    if a.shape[0] != b.size:
        raise DimensionMismatchError(f"Matrix of order {a.shape[0]} cannot solve length {b.size}")
    check_symmetric(a)

    try:
        factor = sla.cho_factor(symmetrize(a), lower=True, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as err:
        raise NotPositiveDefiniteError(f"Cholesky factorization failed: {err}") from err

    return sla.cho_solve(factor, b, check_finite=False)


def woodbury_solve(alpha: float, beta: float, factors: ArrayLike, b: ArrayLike) -> RealVector:
    """Solves (alpha.I + beta.F.F^T) x = b through an N x N inner system, N = columns of F.

        x = b / alpha - (beta / alpha) F (alpha.I_N + beta.F^T.F)^-1 F^T b
    """
    if not alpha > 0:
        raise NonPositiveAlphaError(f"alpha must be positive, got {alpha}")
    if beta < 0:
        raise NegativeBetaError(f"beta must be non-negative, got {beta}")
    factors = as_matrix(factors, "factors")
    b = as_vector(b, "b")
    if factors.shape[0] != b.size:
        raise DimensionMismatchError(
            f"Factor matrix has {factors.shape[0]} rows but right-hand side has length {b.size}"
        )

    if beta == 0:
        return b / alpha

    n = factors.shape[1]
    inner = alpha * np.eye(n) + beta * (factors.T @ factors)
    projected = cholesky_solve(symmetrize(inner), factors.T @ b)
    logging.debug(f"Woodbury solve: order {b.size} reduced to inner order {n}")

    return (b - beta * (factors @ projected)) / alpha
