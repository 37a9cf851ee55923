"""Descriptor realizations (zE - F) x = B u, y = C x + D u of matrix fractions.

A fraction D1^-1 N D2^-1 is realized as the series connection of the three
factors. The finite generalized eigenvalues of the pencil carry the dynamics;
the infinite ones carry the polynomial part, whose constant term is folded into
the feedthrough of the resulting standard state-space system.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg

from ..polyalg.matrix_poly import MatrixPoly, companion_pencil
from ..utils.config import DEFAULT_TOLERANCES, ToleranceConfig
from ..utils.errors import NotRegular
from ..utils.logger import logger
from .state_space import StateSpace


@dataclass(frozen=True, eq=False)
class Descriptor:
    E: np.ndarray
    F: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    @classmethod
    def static(cls, D: np.ndarray) -> "Descriptor":
        n, m = D.shape
        return cls(np.zeros((0, 0)), np.zeros((0, 0)), np.zeros((0, m)), np.zeros((n, 0)), D)

    @property
    def order(self) -> int:
        return self.E.shape[0]


def polynomial_inverse(P: MatrixPoly) -> Descriptor:
    """Realize P[z]^-1 through the first companion pencil."""
    P = P.trim()
    n, d = P.rows, P.degree
    if d == 0:
        try:
            return Descriptor.static(linalg.inv(P.coeff(0)))
        except linalg.LinAlgError as e:
            raise NotRegular(f"Constant denominator is singular: {e}") from e
    F, E = companion_pencil(P)
    B = np.zeros((n * d, n))
    B[-n:] = np.eye(n)
    C = np.zeros((n, n * d))
    C[:, :n] = np.eye(n)
    return Descriptor(E, F, B, C, np.zeros((n, n)))


def polynomial_system(N: MatrixPoly) -> Descriptor:
    """Realize the polynomial N[z] with a nilpotent shift pencil (zJ - I)."""
    N = N.trim()
    n, m = N.shape
    q = N.degree
    if q == 0:
        return Descriptor.static(N.coeff(0).copy())
    k = m * (q + 1)
    J = np.zeros((k, k))
    J[:-m, m:] = np.eye(m * q)
    B = np.zeros((k, m))
    B[-m:] = np.eye(m)
    C = -np.hstack([N.coeff(q - i) for i in range(q + 1)])
    return Descriptor(J, np.eye(k), B, C, np.zeros((n, m)))


def series(first: Descriptor, second: Descriptor) -> Descriptor:
    """Connection u -> first -> second."""
    k1, k2 = first.order, second.order
    E = linalg.block_diag(first.E, second.E)
    F = np.zeros((k1 + k2, k1 + k2))
    F[:k1, :k1] = first.F
    F[k1:, :k1] = second.B @ first.C
    F[k1:, k1:] = second.F
    B = np.vstack([first.B, second.B @ first.D])
    C = np.hstack([second.D @ first.C, second.C])
    return Descriptor(E.reshape(k1 + k2, k1 + k2), F, B, C, second.D @ first.D)


def fraction_descriptor(D1: MatrixPoly, N: MatrixPoly, D2: MatrixPoly) -> Descriptor:
    """Descriptor realization of D1^-1 N D2^-1."""
    return series(series(polynomial_inverse(D2), polynomial_system(N)), polynomial_inverse(D1))


def _decouple(E11, E12, E22, A11, A12, A22) -> Tuple[np.ndarray, np.ndarray]:
    """Solve E11 Y + X E22 = -E12 and A11 Y + X A22 = -A12 for (X, Y)."""
    nf, ni = E12.shape
    I_f, I_i = np.eye(nf), np.eye(ni)
    M = np.block([
        [np.kron(I_i, E11), np.kron(E22.T, I_f)],
        [np.kron(I_i, A11), np.kron(A22.T, I_f)],
    ])
    rhs = -np.concatenate([E12.ravel(order="F"), A12.ravel(order="F")])
    sol = linalg.solve(M, rhs)
    Y = sol[: nf * ni].reshape((nf, ni), order="F")
    X = sol[nf * ni:].reshape((nf, ni), order="F")
    return X, Y


def proper_state_space(desc: Descriptor, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Tuple[StateSpace, float]:
    """Standard realization of the proper part of a descriptor system.

    Returns the state-space system (finite dynamics plus feedthrough) and the
    norm of the discarded polynomial part, which vanishes for proper input.
    """
    k = desc.order
    if k == 0:
        return StateSpace.static(desc.D), 0.0

    e_scale = np.linalg.norm(desc.E) or 1.0
    f_scale = np.linalg.norm(desc.F) or 1.0

    def finite(alpha, beta):
        return np.abs(beta) * f_scale > tol.infinite_eig * np.abs(alpha) * e_scale

    AA, BB, alpha, beta, Q, Z = linalg.ordqz(desc.F, desc.E, sort=finite, output="real")
    nf = int(np.sum(finite(alpha, beta)))
    ni = k - nf
    logger.debug(f"Descriptor split: {nf} finite, {ni} infinite states")

    Bt = Q.T @ desc.B
    Ct = desc.C @ Z
    if ni and nf:
        X, Y = _decouple(BB[:nf, :nf], BB[:nf, nf:], BB[nf:, nf:], AA[:nf, :nf], AA[:nf, nf:], AA[nf:, nf:])
        B1 = Bt[:nf] + X @ Bt[nf:]
        C2 = Ct[:, :nf] @ Y + Ct[:, nf:]
    else:
        B1 = Bt[:nf]
        C2 = Ct[:, nf:]
    C1 = Ct[:, :nf]
    B2 = Bt[nf:]

    D = desc.D.copy()
    polynomial_norm = 0.0
    if ni:
        A22, E22 = AA[nf:, nf:], BB[nf:, nf:]
        term = linalg.solve(A22, B2)
        D = D - C2 @ term
        nil = linalg.solve(A22, E22)
        for _ in range(ni):
            term = nil @ term
            polynomial_norm = max(polynomial_norm, float(np.linalg.norm(C2 @ term)))
        if polynomial_norm > 0.0:
            logger.debug(f"Discarded polynomial part of norm {polynomial_norm:.3e}")

    if nf == 0:
        return StateSpace.static(D), polynomial_norm
    E11 = BB[:nf, :nf]
    A_f = linalg.solve(E11, AA[:nf, :nf])
    B_f = linalg.solve(E11, B1)
    return StateSpace(A_f, B_f, C1, D), polynomial_norm
