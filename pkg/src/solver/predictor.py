"""Feedback realization of the model-consistent forecast.

The forecast is produced causally from observed x, u and w:

    xhat_{1,t} = sum Phi_{t-tau} (A x_tau + B R u_tau) - sum Psi_{t-tau} AF0 w_tau - Psi_t v

with Phi = [I - z Ahat]^-1, Psi = [I - z Ahat]^-1 z Ahat Ahat^g and
v = xhat_{1,-1} - A x_{-1} - B R u_{-1}.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..model.structures import InitCond, ModelCM, check_weak_consistency, check_well_posed
from ..polyalg.impulse import ImpulseSeq
from ..polyalg.matrix_poly import MatrixPoly
from ..polyalg.rational import RationalMatrix, expand_impulse
from ..utils.config import DEFAULT_HORIZON, DEFAULT_TOLERANCES, ToleranceConfig
from ..utils.errors import DimensionError, NotWeaklyConsistent, NotWellPosed
from ..utils.linalg import pseudo_inverse
from ..utils.logger import logger
from .solution import _check_af0


@dataclass(frozen=True, eq=False)
class Predictor:
    Phi: ImpulseSeq
    Psi: ImpulseSeq
    Ag: np.ndarray  # generalized inverse of Ahat
    AF0: np.ndarray

    @property
    def horizon(self) -> int:
        return self.Phi.horizon

    def forecast(self, model: ModelCM, ic: InitCond, x: np.ndarray, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Forecasts xhat_{1,t} from recorded paths x, u, w (each (T' + 1, k))."""
        drive = x @ model.A.T + u @ (model.B @ model.R).T
        v = ic.forecast_gap(model)
        return (self.Phi.apply(drive) - self.Psi.apply(w @ self.AF0.T)
                - self.Psi.truncate(len(x) - 1).contract(v))

    def closed_loop(self, model: ModelCM, ic: InitCond, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Simulate the model driven by this predictor.

        At each step x_t and xhat_{1,t} are solved jointly from
        (I - Ahat Phi_0 A) x_t = A x_{t-1} + Ahat k_t + B u_t and
        xhat_{1,t} = Phi_0 A x_t + k_t, where k_t collects the known terms.

        Returns (x, xhat, u), each with one row per innovation.
        """
        w = np.atleast_2d(np.asarray(w, dtype=float))
        steps = w.shape[0]
        if w.shape[1] != model.m or steps > self.horizon + 1:
            raise DimensionError(f"Expected innovations of shape (<= {self.horizon + 1}, {model.m}), got {w.shape}")
        n = model.n
        A, Ahat, B, R = model.A, model.Ahat, model.B, model.R
        BR = B @ R
        Phi0 = self.Phi[0]
        lhs = np.eye(n) - Ahat @ Phi0 @ A
        v = ic.forecast_gap(model)
        kicks = w @ self.AF0.T

        x = np.zeros((steps, n))
        xhat = np.zeros((steps, n))
        u = np.zeros((steps, model.m))
        drive = np.zeros((steps, n))  # A x_tau + B R u_tau
        x_prev, u_prev = ic.x_prev, ic.u_prev
        for t in range(steps):
            u[t] = R @ u_prev + w[t]
            known = Phi0 @ BR @ u[t] - self.Psi[t] @ v
            for tau in range(t):
                known += self.Phi[t - tau] @ drive[tau]
            for tau in range(t + 1):
                known -= self.Psi[t - tau] @ kicks[tau]
            x[t] = np.linalg.solve(lhs, A @ x_prev + Ahat @ known + B @ u[t])
            xhat[t] = Phi0 @ A @ x[t] + known
            drive[t] = A @ x[t] + BR @ u[t]
            x_prev, u_prev = x[t], u[t]
        return x, xhat, u


def feedback_predictor(model: ModelCM, AF0: np.ndarray, ic: InitCond = None, T: int = DEFAULT_HORIZON,
                       tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Predictor:
    """Expand Phi and Psi for a well-posed model and weakly consistent initial conditions.

    Raises:
        NotWellPosed: [z^2 Ahat - zI + A]^-1 is not strictly proper
        NotWeaklyConsistent: the forecast gap leaves the column span of Ahat
    """
    if ic is None:
        ic = InitCond.zeros(model.n, model.m)
    if not check_well_posed(model, tol):
        raise NotWellPosed("The feedback predictor needs a well-posed model (rank Ahat = rank Ahat^2)")
    if not check_weak_consistency(model, ic, tol):
        raise NotWeaklyConsistent("xhat_{1,-1} - A x_{-1} - B R u_{-1} is not in the column span of Ahat")
    AF0 = _check_af0(model, AF0, tol)

    n = model.n
    Ag = pseudo_inverse(model.Ahat, tol.rank_rtol)
    den = MatrixPoly([np.eye(n), -model.Ahat])
    Phi = expand_impulse(RationalMatrix(den, MatrixPoly.identity(n), tol=tol), T, tol)
    Psi = expand_impulse(RationalMatrix(den, MatrixPoly([np.zeros((n, n)), model.Ahat @ Ag]), tol=tol), T, tol)
    logger.debug(f"Predictor kernels expanded to {T}; |Phi_0| = {np.max(np.abs(Phi[0])):.2e}")
    return Predictor(Phi, Psi, Ag, AF0)
