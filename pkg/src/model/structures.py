"""Model records and admissibility checks.

ModelCM is x_t = A x_{t-1} + Ahat xhat_{1,t} + B u_t with u_t = R u_{t-1} + w_t.
GeneralModel is sum_{i,j} A_ij xhat_{i,t-j} = B u_t with A_00 = I.
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from ..polyalg.matrix_poly import MatrixPoly, is_regular
from ..polyalg.rational import Properness, RationalMatrix, classify_properness
from ..utils.config import DEFAULT_TOLERANCES, ToleranceConfig
from ..utils.errors import AmbiguousWellPosedness, CovarianceNotPSD, DimensionError, InvariantError
from ..utils.linalg import in_image, numerical_rank
from ..utils.logger import logger


def _matrix(value, name: str) -> np.ndarray:
    M = np.atleast_2d(np.asarray(value, dtype=float))
    if M.ndim != 2:
        raise DimensionError(f"{name} must be a matrix, got shape {M.shape}")
    return M


@dataclass(frozen=True, eq=False)
class ModelCM:
    """Coefficients of the one-step-forecast model."""
    A: np.ndarray
    Ahat: np.ndarray
    B: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        A, Ahat, B, R = (_matrix(getattr(self, k), k) for k in ("A", "Ahat", "B", "R"))
        n, m = B.shape
        if A.shape != (n, n) or Ahat.shape != (n, n):
            raise DimensionError(f"A {A.shape} and Ahat {Ahat.shape} must be {n}x{n} to match B {B.shape}")
        if R.shape != (m, m):
            raise DimensionError(f"R must be {m}x{m}, got {R.shape}")
        if not np.any(Ahat):
            raise InvariantError("Ahat must be nonzero (the model has no forecasts otherwise)")
        for name, value in (("A", A), ("Ahat", Ahat), ("B", B), ("R", R)):
            object.__setattr__(self, name, value)

    @property
    def n(self) -> int:
        return self.B.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    def characteristic(self, gain: float = 1.0) -> MatrixPoly:
        """[z^2 gain Ahat - z I + A]; gain = 0 gives the degree-one -zI + A."""
        if gain == 0.0:
            return MatrixPoly([self.A, -np.eye(self.n)])
        return MatrixPoly([self.A, -np.eye(self.n), gain * self.Ahat])

    def shock_filter(self) -> MatrixPoly:
        """zI - R."""
        return MatrixPoly([-self.R, np.eye(self.m)])

    def same_as(self, other: "ModelCM", atol: float = 0.0) -> bool:
        return all(np.allclose(getattr(self, k), getattr(other, k), rtol=0.0, atol=atol)
                   for k in ("A", "Ahat", "B", "R"))


@dataclass(frozen=True, eq=False)
class InitCond:
    """x_{-1}, xhat_{1,-1} and u_{-1}."""
    x_prev: np.ndarray
    xhat_prev: np.ndarray
    u_prev: np.ndarray

    def __post_init__(self):
        for name in ("x_prev", "xhat_prev", "u_prev"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).ravel())

    @classmethod
    def zeros(cls, n: int, m: int) -> "InitCond":
        return cls(np.zeros(n), np.zeros(n), np.zeros(m))

    def check_dims(self, model: ModelCM) -> None:
        if self.x_prev.shape != (model.n,) or self.xhat_prev.shape != (model.n,) or self.u_prev.shape != (model.m,):
            raise DimensionError(f"Initial conditions do not match a model with n={model.n}, m={model.m}")

    def is_zero(self) -> bool:
        return not (np.any(self.x_prev) or np.any(self.xhat_prev) or np.any(self.u_prev))

    def forecast_gap(self, model: ModelCM) -> np.ndarray:
        """xhat_{1,-1} - A x_{-1} - B R u_{-1}."""
        return self.xhat_prev - model.A @ self.x_prev - model.B @ model.R @ self.u_prev


@dataclass(frozen=True, eq=False)
class ShockSpec:
    """Law of the innovations w_t: zero mean, given covariance, seeded."""
    covariance: np.ndarray
    seed: int = 0

    def __post_init__(self):
        cov = _matrix(self.covariance, "covariance")
        if cov.shape[0] != cov.shape[1]:
            raise DimensionError(f"Covariance must be square, got {cov.shape}")
        if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-12 * max(1.0, np.max(np.abs(cov)))):
            raise CovarianceNotPSD("Covariance is not symmetric")
        if np.min(np.linalg.eigvalsh(cov)) < -1e-12:
            raise CovarianceNotPSD("Covariance has a negative eigenvalue")
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "seed", int(self.seed))

    def factor(self) -> np.ndarray:
        """L with L L^T = covariance (eigen factor, exact zeros for zero variance)."""
        vals, vecs = np.linalg.eigh(self.covariance)
        return vecs * np.sqrt(np.clip(vals, 0.0, None))


@dataclass(frozen=True, eq=False)
class GeneralModel:
    """sum_{i<=h, j<=l} A_ij xhat_{i,t-j} = B u_t, u_t = R u_{t-1} + w_t."""
    h: int
    l: int
    coeffs: Dict[Tuple[int, int], np.ndarray]
    B: np.ndarray
    R: np.ndarray
    _zero: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        B, R = _matrix(self.B, "B"), _matrix(self.R, "R")
        n, m = B.shape
        if R.shape != (m, m):
            raise DimensionError(f"R must be {m}x{m}, got {R.shape}")
        if self.h < 1 or self.l < 0:
            raise InvariantError(f"Need h >= 1 and l >= 0, got h={self.h}, l={self.l}")
        coeffs = {}
        for (i, j), value in self.coeffs.items():
            if not (0 <= i <= self.h and 0 <= j <= self.l):
                raise InvariantError(f"Coefficient A_{i}_{j} outside 0..{self.h} x 0..{self.l}")
            M = _matrix(value, f"A_{i}_{j}")
            if M.shape != (n, n):
                raise DimensionError(f"A_{i}_{j} must be {n}x{n}, got {M.shape}")
            coeffs[(i, j)] = M
        if not np.array_equal(coeffs.get((0, 0)), np.eye(n)):
            raise InvariantError("A_0_0 must be exactly the identity")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "_zero", np.zeros((n, n)))

    @classmethod
    def from_model_cm(cls, model: ModelCM) -> "GeneralModel":
        """The h = l = 1 embedding: x_t - A x_{t-1} - Ahat xhat_{1,t} = B u_t."""
        return cls(1, 1, {(0, 0): np.eye(model.n), (0, 1): -model.A, (1, 0): -model.Ahat}, model.B, model.R)

    @property
    def n(self) -> int:
        return self.B.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    def coefficient(self, i: int, j: int) -> np.ndarray:
        return self.coeffs.get((i, j), self._zero)

    def denominator(self) -> MatrixPoly:
        """D[z] = sum z^{i+l-j} A_ij."""
        out = np.zeros((self.h + self.l + 1, self.n, self.n))
        for (i, j), M in self.coeffs.items():
            out[i + self.l - j] += M
        return MatrixPoly(out)


def check_regular(model: ModelCM, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> bool:
    """Is [z^2 Ahat - zI + A] regular?"""
    return is_regular(model.characteristic(), tol)


def check_well_posed(model: ModelCM, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> bool:
    """Is [z^2 Ahat - zI + A]^-1 strictly proper?

    Decided by rank(Ahat) = rank(Ahat^2) and confirmed by sampling the inverse.
    """
    rank_test = numerical_rank(model.Ahat, tol.rank_rtol) == numerical_rank(model.Ahat @ model.Ahat, tol.rank_rtol)
    inverse = RationalMatrix(model.characteristic(), MatrixPoly.identity(model.n), tol=tol)
    sampling_test = classify_properness(inverse, tol) is Properness.STRICTLY_PROPER
    if rank_test != sampling_test:
        raise AmbiguousWellPosedness(
            f"Rank test says {'' if rank_test else 'not '}well-posed, sampling test disagrees")
    logger.debug(f"Well-posedness: {rank_test}")
    return rank_test


def check_weak_consistency(model: ModelCM, ic: InitCond, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> bool:
    """Does xhat_{1,-1} - A x_{-1} - B R u_{-1} lie in the column span of Ahat?"""
    ic.check_dims(model)
    return in_image(model.Ahat, ic.forecast_gap(model), tol.rank_rtol, tol.image_residual)


def check_general_regular(model: GeneralModel, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> bool:
    return is_regular(model.denominator(), tol)
