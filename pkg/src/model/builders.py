"""Structural builders: the three-equation New Keynesian model and Taylor's example.

The NK equations, with x = (y, pi, r) and u = (g, z, eps_r):

    y  = yhat - tau (r - pihat) + g
    pi = beta pihat + kappa (y - z)
    r  = rho_r r_{-1} + (1 - rho_r)(psi1 pi + psi2 (y - z)) + eps_r

are stacked as G0 x_t = G1 x_{t-1} + Ge xhat_{1,t} + Gu u_t.
"""

from dataclasses import asdict, dataclass, replace
from typing import Dict

import numpy as np
from scipy import linalg

from ..utils.errors import InvariantError, SingularStructure, ZeroDelta
from .structures import GeneralModel, ModelCM


@dataclass(frozen=True)
class NKParams:
    """Structural parameters of the NK model."""
    tau: float  # intertemporal substitution elasticity
    beta: float  # discount factor
    kappa: float  # Phillips curve slope
    psi1: float  # policy response to inflation
    psi2: float  # policy response to the output gap
    rho_r: float  # interest rate smoothing
    rho_g: float = 0.7
    rho_z: float = 0.7
    sign_fix: bool = False  # flip the signs of tau and kappa

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise InvariantError(f"beta must lie in (0, 1], got {self.beta}")
        for name in ("rho_r", "rho_g", "rho_z"):
            if not 0.0 <= getattr(self, name) < 1.0:
                raise InvariantError(f"{name} must lie in [0, 1), got {getattr(self, name)}")

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


# Recovered from the numeric NK fixture: rho_r = A33 / B33, tau and kappa from the
# first two rows of G0 B = Gu, psi2 from the third.
NK_CALIBRATION = NKParams(tau=0.5, beta=0.99, kappa=0.5, psi1=1.10, psi2=0.25, rho_r=0.5)


def nk_passive() -> NKParams:
    """Passive policy variant (psi1 = 0.90)."""
    return replace(NK_CALIBRATION, psi1=0.90)


def nk_sign_fixed(psi1: float = 1.10, psi2: float = 1.50) -> NKParams:
    """Calibration with the signs of tau and kappa flipped."""
    return replace(NK_CALIBRATION, psi1=psi1, psi2=psi2, sign_fix=True)


def nk_unfixed_policy(psi1: float = 1.10, psi2: float = -1.50) -> NKParams:
    """Policy coefficients that stabilize the dynamics without the sign fix."""
    return replace(NK_CALIBRATION, psi1=psi1, psi2=psi2)


def nk_structure(p: NKParams):
    """Structural matrices (G0, G1, Ge, Gu)."""
    tau, kappa = (-p.tau, -p.kappa) if p.sign_fix else (p.tau, p.kappa)
    a_pi = (1.0 - p.rho_r) * p.psi1
    a_y = (1.0 - p.rho_r) * p.psi2
    G0 = np.array([
        [1.0, 0.0, tau],
        [-kappa, 1.0, 0.0],
        [-a_y, -a_pi, 1.0],
    ])
    G1 = np.diag([0.0, 0.0, p.rho_r])
    Ge = np.array([
        [1.0, tau, 0.0],
        [0.0, p.beta, 0.0],
        [0.0, 0.0, 0.0],
    ])
    Gu = np.array([
        [1.0, 0.0, 0.0],
        [0.0, -kappa, 0.0],
        [0.0, -a_y, 1.0],
    ])
    return G0, G1, Ge, Gu


def build_nk(p: NKParams) -> ModelCM:
    """Reduced form A = G0^-1 G1, Ahat = G0^-1 Ge, B = G0^-1 Gu, R = diag(rho_g, rho_z, 0)."""
    G0, G1, Ge, Gu = nk_structure(p)
    if abs(linalg.det(G0)) < 1e-12:
        raise SingularStructure(f"Structural matrix G0 is singular for {p}")
    lu = linalg.lu_factor(G0)
    return ModelCM(
        A=linalg.lu_solve(lu, G1),
        Ahat=linalg.lu_solve(lu, Ge),
        B=linalg.lu_solve(lu, Gu),
        R=np.diag([p.rho_g, p.rho_z, 0.0]),
    )


def build_taylor(delta1: float) -> GeneralModel:
    """Taylor's price model p_t = -(phat_{1,t-1} - phat_{2,t-1} + u_t) / delta1, R = 0."""
    if delta1 == 0:
        raise ZeroDelta("delta1 must be nonzero")
    inv = 1.0 / delta1
    coeffs = {
        (0, 0): np.eye(1),
        (1, 1): np.array([[inv]]),
        (2, 1): np.array([[-inv]]),
    }
    return GeneralModel(h=2, l=1, coeffs=coeffs, B=np.array([[-inv]]), R=np.zeros((1, 1)))
