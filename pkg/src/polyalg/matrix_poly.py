"""Matrix polynomials P[z] = sum_k z^k A_k and their eigenstructure."""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy import linalg

from ..utils.config import DEFAULT_TOLERANCES, ToleranceConfig
from ..utils.errors import DimensionError, FullRank, NotRegular
from ..utils.logger import logger

ArrayLike = Union[np.ndarray, Sequence]


class MatrixPoly:
    """Matrix polynomial with real n x m coefficients in ascending powers of z.

    Coefficients are stored as an array of shape (d + 1, n, m). Instances are
    treated as immutable; every operation returns a new polynomial.
    """

    # Let numpy defer to __rmatmul__ for ndarray @ MatrixPoly
    __array_ufunc__ = None

    def __init__(self, coeffs: Union[ArrayLike, Sequence[ArrayLike]]):
        """Initialize a matrix polynomial.

        Args:
            coeffs: sequence of equally shaped matrices A_0..A_d, or an array of
                shape (d + 1, n, m)
        """
        mats = [np.atleast_2d(np.asarray(c, dtype=float)) for c in coeffs]
        if not mats:
            raise DimensionError("A matrix polynomial needs at least one coefficient")
        shape = mats[0].shape
        if any(m.shape != shape for m in mats):
            raise DimensionError(f"Coefficient shapes differ: {[m.shape for m in mats]}")
        self._coeffs = np.stack(mats)
        self._coeffs.setflags(write=False)

    @classmethod
    def constant(cls, M: ArrayLike) -> "MatrixPoly":
        return cls([M])

    @classmethod
    def identity(cls, n: int) -> "MatrixPoly":
        return cls([np.eye(n)])

    @classmethod
    def zeros(cls, n: int, m: int) -> "MatrixPoly":
        return cls([np.zeros((n, m))])

    @classmethod
    def shift_identity(cls, n: int, k: int = 1) -> "MatrixPoly":
        """z^k I."""
        return cls.identity(n).shift(k)

    @classmethod
    def block_diag(cls, *polys: "MatrixPoly") -> "MatrixPoly":
        d = max(p.degree for p in polys)
        return cls([linalg.block_diag(*[p.coeff(k) for p in polys]) for k in range(d + 1)])

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def rows(self) -> int:
        return self._coeffs.shape[1]

    @property
    def cols(self) -> int:
        return self._coeffs.shape[2]

    @property
    def shape(self):
        return self._coeffs.shape[1:]

    @property
    def degree(self) -> int:
        return self._coeffs.shape[0] - 1

    def coeff(self, k: int) -> np.ndarray:
        """Coefficient of z^k (zero outside the stored range)."""
        if 0 <= k <= self.degree:
            return self._coeffs[k]
        return np.zeros(self.shape)

    def leading(self) -> np.ndarray:
        return self._coeffs[-1]

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._coeffs))) if self._coeffs.size else 0.0

    def trim(self, atol: float = 0.0) -> "MatrixPoly":
        """Drop trailing coefficients whose entries are all within atol of zero."""
        d = self.degree
        while d > 0 and np.all(np.abs(self._coeffs[d]) <= atol):
            d -= 1
        return MatrixPoly(self._coeffs[: d + 1])

    def is_zero(self) -> bool:
        return not np.any(self._coeffs)

    def __call__(self, z: complex) -> np.ndarray:
        """Evaluate at a (complex) point by Horner's rule."""
        value = np.zeros(self.shape, dtype=complex if np.iscomplexobj(z) else float)
        for c in self._coeffs[::-1]:
            value = value * z + c
        return value

    def shift(self, k: int) -> "MatrixPoly":
        """Multiply by z^k, k >= 0."""
        if k <= 0:
            return self
        pad = np.zeros((k,) + self.shape)
        return MatrixPoly(np.concatenate([pad, self._coeffs]))

    def transpose(self) -> "MatrixPoly":
        return MatrixPoly(np.transpose(self._coeffs, (0, 2, 1)))

    def _aligned(self, other: "MatrixPoly"):
        if self.shape != other.shape:
            raise DimensionError(f"Cannot add {self.shape} and {other.shape} polynomials")
        d = max(self.degree, other.degree)
        return ([self.coeff(k) for k in range(d + 1)], [other.coeff(k) for k in range(d + 1)])

    def __add__(self, other: "MatrixPoly") -> "MatrixPoly":
        other = _as_poly(other)
        a, b = self._aligned(other)
        return MatrixPoly([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "MatrixPoly") -> "MatrixPoly":
        other = _as_poly(other)
        a, b = self._aligned(other)
        return MatrixPoly([x - y for x, y in zip(a, b)])

    def __neg__(self) -> "MatrixPoly":
        return MatrixPoly(-self._coeffs)

    def __mul__(self, scalar: float) -> "MatrixPoly":
        return MatrixPoly(self._coeffs * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other) -> "MatrixPoly":
        other = _as_poly(other)
        if self.cols != other.rows:
            raise DimensionError(f"Cannot multiply {self.shape} by {other.shape}")
        out = np.zeros((self.degree + other.degree + 1, self.rows, other.cols))
        for i, a in enumerate(self._coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a @ b
        return MatrixPoly(out)

    def __rmatmul__(self, other) -> "MatrixPoly":
        return _as_poly(other) @ self

    def __repr__(self) -> str:
        return f"MatrixPoly(degree={self.degree}, shape={self.shape})"


def _as_poly(value) -> MatrixPoly:
    if isinstance(value, MatrixPoly):
        return value
    return MatrixPoly.constant(value)


@dataclass(frozen=True)
class EigenSet:
    """Finite eigenvalues (descending modulus) and the count of infinite ones."""
    finite: np.ndarray
    infinite_count: int
    left_vectors: Optional[List[Optional[np.ndarray]]] = field(default=None, compare=False)

    def unstable(self, margin: float) -> np.ndarray:
        return self.finite[np.abs(self.finite) > 1.0 + margin]

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.finite))) if self.finite.size else 0.0


def det_poly(P: MatrixPoly, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Coefficients (ascending) of det P[z].

    The determinant is sampled at n*d + 1 roots of unity and fitted by a
    discrete Fourier transform. Coefficients below the floor are set to zero
    and trailing zeros dropped; the zero polynomial is returned as [0.0].
    """
    if P.rows != P.cols:
        raise DimensionError(f"Determinant of a non-square {P.shape} polynomial")
    n, d = P.rows, P.degree
    count = n * d + 1
    points = np.exp(2j * np.pi * np.arange(count) / count)
    values = np.array([linalg.det(P(z)) for z in points])
    coeffs = np.real(np.fft.fft(values)) / count
    floor = tol.det_floor * max(P.max_abs(), 1e-300) ** n
    coeffs[np.abs(coeffs) < floor] = 0.0
    nonzero = np.flatnonzero(coeffs)
    if nonzero.size == 0:
        return np.zeros(1)
    return coeffs[: nonzero[-1] + 1]


def is_regular(P: MatrixPoly, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> bool:
    """True iff det P[z] is not the zero polynomial."""
    return bool(np.any(det_poly(P, tol)))


def companion_pencil(P: MatrixPoly):
    """First companion linearization (C, E) with C v = lambda E v."""
    n, d = P.rows, P.degree
    C = np.zeros((n * d, n * d))
    C[:-n, n:] = np.eye(n * (d - 1))
    C[-n:, :] = -np.hstack([P.coeff(k) for k in range(d)])
    E = np.eye(n * d)
    E[-n:, -n:] = P.leading()
    return C, E


def polyeig(P: MatrixPoly, tol: ToleranceConfig = DEFAULT_TOLERANCES,
            with_left_vectors: bool = False) -> EigenSet:
    """Finite and infinite eigenvalues of a regular square matrix polynomial."""
    P = P.trim()
    dpoly = det_poly(P, tol)
    if not np.any(dpoly):
        raise NotRegular("det P[z] is the zero polynomial")
    n, d = P.rows, P.degree
    finite_count = len(dpoly) - 1
    if d == 0:
        return EigenSet(np.zeros(0, dtype=complex), 0, [] if with_left_vectors else None)

    C, E = companion_pencil(P)
    alpha, beta = linalg.eig(C, E, right=False, homogeneous_eigvals=True)
    # Rank by |beta| relative to |alpha|; the finite_count most finite ones are kept
    weight = np.abs(beta) / (np.abs(alpha) + np.abs(beta))
    order = np.argsort(-weight, kind="stable")
    keep = order[:finite_count]
    finite = alpha[keep] / beta[keep]
    finite = finite[np.lexsort((finite.imag, -np.abs(finite)))]

    dropped = weight[order[finite_count:]]
    if dropped.size and np.max(dropped) > tol.infinite_eig:
        logger.debug(f"polyeig: eigenvalues counted infinite have |beta| weight up to {np.max(dropped):.2e}")
    logger.debug(f"polyeig: pencil size {n * d}, {finite_count} finite, {n * d - finite_count} infinite")

    vectors = None
    if with_left_vectors:
        vectors = []
        for lam in finite:
            try:
                vectors.append(left_nullvector(P(lam), tol))
            except FullRank:
                vectors.append(None)
    return EigenSet(finite, n * d - finite_count, vectors)


def left_nullvector(M: np.ndarray, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Unit row vector c with c M ~ 0 from the smallest singular triplet."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    U, s, _ = linalg.svd(M)
    if s[0] == 0.0:
        c = np.zeros(M.shape[0], dtype=complex)
        c[0] = 1.0
        return c
    if s[-1] > tol.null_rtol * s[0]:
        raise FullRank(f"Smallest singular value {s[-1]:.3e} exceeds {tol.null_rtol:.1e} x {s[0]:.3e}")
    c = U[:, -1].conj()
    c = c / np.linalg.norm(c)
    pivot = np.flatnonzero(np.abs(c) > 1e-12 * np.max(np.abs(c)))[0]
    c = c * (np.conj(c[pivot]) / np.abs(c[pivot]))
    c[pivot] = np.abs(c[pivot])
    return c
