"""Rational matrices as matrix fractions D1[z]^-1 N[z] D2[z]^-1."""

from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

from ..realize.descriptor import fraction_descriptor, proper_state_space
from ..realize.state_space import StateSpace, ss_impulse
from ..utils.config import DEFAULT_TOLERANCES, ToleranceConfig
from ..utils.errors import DimensionError, ImproperInput, NotRegular, SamplePoleCollision
from ..utils.logger import logger
from .impulse import ImpulseSeq
from .matrix_poly import MatrixPoly, is_regular, polyeig


class Properness(str, Enum):
    IMPROPER = "Improper"
    PROPER = "Proper"
    STRICTLY_PROPER = "StrictlyProper"

    @property
    def is_proper(self) -> bool:
        return self is not Properness.IMPROPER


class RationalMatrix:
    """Matrix fraction D1^-1 N D2^-1 with regular square denominators."""

    def __init__(self, left_den: MatrixPoly, num: MatrixPoly, right_den: Optional[MatrixPoly] = None,
                 tol: ToleranceConfig = DEFAULT_TOLERANCES):
        """Initialize a matrix fraction.

        Args:
            left_den: n x n regular polynomial D1
            num: n x m numerator N
            right_den: m x m regular polynomial D2 (identity when omitted)
            tol: tolerances for the regularity checks
        """
        if right_den is None:
            right_den = MatrixPoly.identity(num.cols)
        if left_den.rows != left_den.cols or right_den.rows != right_den.cols:
            raise DimensionError("Denominators must be square")
        if left_den.rows != num.rows or num.cols != right_den.rows:
            raise DimensionError(
                f"Cannot compose {left_den.shape}^-1 {num.shape} {right_den.shape}^-1")
        for name, den in (("left", left_den), ("right", right_den)):
            if not is_regular(den, tol):
                raise NotRegular(f"The {name} denominator is not regular")
        self.left_den = left_den
        self.num = num
        self.right_den = right_den

    @property
    def shape(self):
        return self.num.shape

    def __call__(self, z: complex) -> np.ndarray:
        value = linalg.solve(self.left_den(z), self.num(z))
        if self.right_den.degree == 0 and np.array_equal(self.right_den.coeff(0), np.eye(self.num.cols)):
            return value
        return linalg.solve(self.right_den(z).T, value.T).T

    def scaled(self, factor: float) -> "RationalMatrix":
        return RationalMatrix(self.left_den * factor, self.num * factor, self.right_den * factor)

    def pole_bound(self, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Tuple[float, np.ndarray]:
        """Largest finite-eigenvalue modulus of both denominators, and the eigenvalues."""
        eigs = [polyeig(den, tol).finite for den in (self.left_den, self.right_den) if den.trim().degree > 0]
        poles = np.concatenate(eigs) if eigs else np.zeros(0, dtype=complex)
        sigma = float(np.max(np.abs(poles))) if poles.size else 0.0
        return sigma, poles

    def __repr__(self) -> str:
        return (f"RationalMatrix(shape={self.shape}, deg D1={self.left_den.degree}, "
                f"deg N={self.num.degree}, deg D2={self.right_den.degree})")


def _sample_magnitudes(Rm: RationalMatrix, radius: float, angles: np.ndarray,
                       vector: Optional[np.ndarray]) -> np.ndarray:
    values = []
    for theta in angles:
        value = Rm(radius * np.exp(1j * theta))
        if vector is not None:
            value = value @ vector
        values.append(np.abs(value))
    return np.max(np.array(values), axis=0)


def growth_exponents(Rm: RationalMatrix, tol: ToleranceConfig = DEFAULT_TOLERANCES,
                     vector: Optional[np.ndarray] = None):
    """Entrywise magnitudes at both radii and fitted growth exponents.

    Entries negligible at both radii get exponent -inf.
    """
    sigma, poles = Rm.pole_bound(tol)
    rho1 = tol.sample_radius * (1.0 + sigma)
    rho2 = 10.0 * rho1
    base = 2.0 * np.pi * np.arange(tol.sample_angles) / tol.sample_angles
    for attempt in range(tol.collision_retries + 1):
        angles = base + attempt * 0.1234567
        points = np.concatenate([rho * np.exp(1j * angles) for rho in (rho1, rho2)])
        if poles.size == 0 or np.min(np.abs(points[:, None] - poles[None, :])) > tol.pole_collision:
            break
        logger.warning(f"Sample point within {tol.pole_collision} of a pole; retry {attempt + 1}")
    else:
        raise SamplePoleCollision(f"Sample points collide with denominator eigenvalues after "
                                  f"{tol.collision_retries} retries")

    m1 = _sample_magnitudes(Rm, rho1, angles, vector)
    m2 = _sample_magnitudes(Rm, rho2, angles, vector)
    scale = max(float(np.max(m1)), float(np.max(m2)))
    negligible = (m1 <= tol.negligible * scale) & (m2 <= tol.negligible * scale)
    with np.errstate(divide="ignore", invalid="ignore"):
        exponents = np.log10(m2 / m1)
    exponents = np.where(negligible, -np.inf, exponents)
    # An entry that only shows up at the outer radius is growing
    exponents = np.where(~negligible & (m1 == 0.0), np.inf, exponents)
    return m1, m2, exponents


def classify_properness(Rm: RationalMatrix, tol: ToleranceConfig = DEFAULT_TOLERANCES,
                        vector: Optional[np.ndarray] = None) -> Properness:
    """Classify D1^-1 N D2^-1 (or its product with ``vector``) at z -> infinity."""
    _, _, exponents = growth_exponents(Rm, tol, vector)
    if np.any(exponents >= tol.growth_exponent):
        return Properness.IMPROPER
    if np.all(exponents <= -tol.growth_exponent):
        return Properness.STRICTLY_PROPER
    return Properness.PROPER


def to_state_space(Rm: RationalMatrix, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> StateSpace:
    """Non-minimal state-space realization of a proper matrix fraction."""
    system, _ = proper_state_space(fraction_descriptor(Rm.left_den, Rm.num, Rm.right_den), tol)
    return system


def expand_impulse(Rm: RationalMatrix, T: int, tol: ToleranceConfig = DEFAULT_TOLERANCES,
                   check: bool = True) -> ImpulseSeq:
    """Inverse z-transform coefficients of a proper matrix fraction for t = 0..T."""
    if check:
        properness = classify_properness(Rm, tol)
        if properness is Properness.IMPROPER:
            raise ImproperInput(f"Cannot expand an improper rational matrix {Rm}")
    return ss_impulse(to_state_space(Rm, tol), T)
