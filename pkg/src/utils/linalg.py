"""SVD helpers: numerical rank, column-span bases and pseudo-inverses."""

import numpy as np
from scipy import linalg


def numerical_rank(M: np.ndarray, rtol: float) -> int:
    """Number of singular values above rtol times the largest one."""
    M = np.atleast_2d(M)
    if M.size == 0:
        return 0
    s = linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def range_basis(M: np.ndarray, rtol: float) -> np.ndarray:
    """Orthonormal basis (columns) of the column span of M."""
    M = np.atleast_2d(M)
    U, s, _ = linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((M.shape[0], 0))
    r = int(np.sum(s > rtol * s[0]))
    return U[:, :r]


def image_residual(M: np.ndarray, V: np.ndarray, rtol: float) -> float:
    """Norm of the part of V (vector or columns) outside the column span of M."""
    V = np.asarray(V, dtype=float)
    U = range_basis(M, rtol)
    return float(np.linalg.norm(V - U @ (U.T @ V)))


def in_image(M: np.ndarray, V: np.ndarray, rtol: float, residual_tol: float) -> bool:
    """Membership test used for weak consistency and free parameters."""
    V = np.asarray(V, dtype=float)
    return image_residual(M, V, rtol) <= residual_tol * (1.0 + np.linalg.norm(V))


def pseudo_inverse(M: np.ndarray, rtol: float) -> np.ndarray:
    """Moore-Penrose inverse with a relative singular-value cutoff."""
    return linalg.pinv(np.atleast_2d(M), rtol=rtol)
