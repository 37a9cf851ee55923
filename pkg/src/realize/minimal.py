"""Minimal realization of proper rational matrices from Markov parameters."""

from typing import Optional

import numpy as np
from scipy import linalg

from ..polyalg.impulse import ImpulseSeq
from ..polyalg.rational import RationalMatrix, expand_impulse
from ..utils.config import DEFAULT_TOLERANCES, ToleranceConfig
from ..utils.errors import DimensionError, HintTooSmall
from ..utils.logger import logger
from .state_space import StateSpace


def mcmillan_bound(Rm: RationalMatrix) -> int:
    """Upper bound n * deg D1 + m * deg D2 on the realization order."""
    n, m = Rm.shape
    return n * Rm.left_den.trim().degree + m * Rm.right_den.trim().degree


def block_hankel(markov: np.ndarray, first: int, size: int) -> np.ndarray:
    """Block Hankel matrix with (i, j) block markov[first + i + j], 0 <= i, j < size."""
    n, m = markov.shape[1:]
    H = np.zeros((size * n, size * m))
    for i in range(size):
        for j in range(size):
            H[i * n:(i + 1) * n, j * m:(j + 1) * m] = markov[first + i + j]
    return H


def ho_kalman(impulse: ImpulseSeq, hint: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> StateSpace:
    """Balanced Ho-Kalman realization from terms 0..2 * hint + 2."""
    markov = impulse.terms
    if impulse.horizon < 2 * hint + 2:
        raise DimensionError(f"Need {2 * hint + 3} Markov parameters, got {len(impulse)}")
    n, m = impulse.shape
    size = hint + 1
    H = block_hankel(markov, 1, size)
    H_shift = block_hankel(markov, 2, size)

    U, s, Vt = linalg.svd(H)
    scale = max(float(np.max(np.abs(markov))), 1.0)
    if s.size == 0 or s[0] <= tol.hankel_rtol * scale:
        return StateSpace.static(markov[0])
    k = int(np.sum(s > tol.hankel_rtol * s[0]))
    logger.debug(f"Hankel singular values: {np.array2string(s[: k + 2], precision=3)}")
    if k == min(H.shape):
        raise HintTooSmall(f"Hankel matrix of size {H.shape} has full rank {k}; increase the order hint")

    root = np.sqrt(s[:k])
    obs = U[:, :k] * root
    ctrb = root[:, None] * Vt[:k]
    A = (U[:, :k].T @ H_shift @ Vt[:k].T) / np.outer(root, root)
    return StateSpace(A, ctrb[:, :m], obs[:n], markov[0])


def minimal_realization(Rm: RationalMatrix, hint: Optional[int] = None,
                        tol: ToleranceConfig = DEFAULT_TOLERANCES) -> StateSpace:
    """Minimal (A, B, C, D) whose Markov parameters match Rm's expansion.

    Args:
        Rm: proper rational matrix
        hint: maximum order; defaults to the McMillan bound n deg D1 + m deg D2
        tol: tolerances (hankel_rtol sets the numerical rank)
    """
    if hint is None:
        hint = max(mcmillan_bound(Rm), 1)
    impulse = expand_impulse(Rm, 2 * hint + 2, tol)
    system = ho_kalman(impulse, hint, tol)
    logger.debug(f"Minimal realization of order {system.order} (hint {hint})")
    return system
