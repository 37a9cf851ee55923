"""Model-consistent solutions of x_t = A x_{t-1} + Ahat xhat_{1,t} + B u_t.

Kernels are stored u-driven: x_t = sum G_{t-tau} ut_tau + xbar_t with
ut_t = u_t - R^{t+1} u_{-1}. The w-driven kernels follow by convolution with R^t.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..model.structures import InitCond, ModelCM
from ..polyalg.impulse import ImpulseSeq
from ..polyalg.matrix_poly import MatrixPoly
from ..polyalg.rational import Properness, RationalMatrix, classify_properness, expand_impulse, growth_exponents
from ..utils.config import DEFAULT_HORIZON, DEFAULT_TOLERANCES, ToleranceConfig
from ..utils.errors import DimensionError, InconsistentInitialConditions, NoSolution, NotInImage
from ..utils.linalg import image_residual, in_image, pseudo_inverse
from ..utils.logger import logger


def _check_af0(model: ModelCM, AF0: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    AF0 = np.atleast_2d(np.asarray(AF0, dtype=float))
    if AF0.shape != (model.n, model.m):
        raise DimensionError(f"AF0 must be {model.n}x{model.m}, got {AF0.shape}")
    if not in_image(model.Ahat, AF0, tol.rank_rtol, tol.image_residual):
        residual = image_residual(model.Ahat, AF0, tol.rank_rtol)
        raise NotInImage(f"AF0 columns leave the column span of Ahat (residual {residual:.3e})")
    return AF0


@dataclass(frozen=True, eq=False)
class Solution:
    """One member of the solution family, fixed by the free parameter AF0."""
    model: ModelCM
    ic: InitCond
    AF0: np.ndarray
    Fz: RationalMatrix
    Gz: RationalMatrix
    Ft: ImpulseSeq
    Gt: ImpulseSeq
    Xbarz: RationalMatrix
    xbar: np.ndarray  # (T + 2, n), t = 0..T+1

    @property
    def horizon(self) -> int:
        return self.Gt.horizon

    @property
    def error_coeff(self) -> np.ndarray:
        """AF0 + B, the response of the forecast error to w_t."""
        return self.AF0 + self.model.B

    def w_kernels(self) -> Tuple[ImpulseSeq, ImpulseSeq]:
        """(F~, G~): kernels driven by w_t rather than u_t."""
        R = self.model.R
        return self.Ft.right_power_convolve(R), self.Gt.right_power_convolve(R)

    def forecast_gain(self, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
        """Minimum-norm F0 with Ahat F0 = AF0."""
        return pseudo_inverse(self.model.Ahat, tol.rank_rtol) @ self.AF0

    def respond(self, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Paths (x_t, xhat_{1,t}, u_t) for innovations w_0..w_T'.

        ``w`` has shape (T' + 1, m), optionally with leading batch axes, and
        T' may not exceed the solution horizon.
        """
        w = np.asarray(w, dtype=float)
        steps = w.shape[-2]
        if w.shape[-1] != self.model.m or steps > self.horizon + 1:
            raise DimensionError(f"Expected innovations of shape (<= {self.horizon + 1}, {self.model.m}), "
                                 f"got {w.shape}")
        R = self.model.R
        shifted = np.zeros_like(w)  # u_t - R^{t+1} u_{-1}
        shifted[..., 0, :] = w[..., 0, :]
        for t in range(1, steps):
            shifted[..., t, :] = shifted[..., t - 1, :] @ R.T + w[..., t, :]
        carry = ImpulseSeq.powers(R, steps).contract(self.ic.u_prev)[1:]  # R^{t+1} u_{-1}
        x = self.Gt.apply(shifted) + self.xbar[:steps]
        xhat = self.Ft.apply(shifted) + self.xbar[1: steps + 1]
        return x, xhat, shifted + carry


def zero_state(model: ModelCM, AF0: np.ndarray, T: int = DEFAULT_HORIZON,
               tol: ToleranceConfig = DEFAULT_TOLERANCES):
    """F[z], G[z] and their expansions for zero initial conditions.

    F[z] = D^-1 [(zI - A) K (zI - R) - z^2 B] and G[z] = D^-1 z [Ahat K (zI - R) - B]
    with D = z^2 Ahat - zI + A and K = AF0 + B.

    Raises:
        NotInImage: AF0 is not of the form Ahat F0
        NoSolution: F[z] is improper
    """
    AF0 = _check_af0(model, AF0, tol)
    n, m = model.n, model.m
    K = AF0 + model.B
    D = model.characteristic()
    zero = np.zeros((n, m))

    num_f = MatrixPoly([-model.A, np.eye(n)]) @ K @ model.shock_filter() - MatrixPoly([zero, zero, model.B])
    num_g = MatrixPoly([zero, -model.Ahat @ K @ model.R - model.B, model.Ahat @ K])
    Fz = RationalMatrix(D, num_f, tol=tol)
    Gz = RationalMatrix(D, num_g, tol=tol)

    properness = classify_properness(Fz, tol)
    if properness is Properness.IMPROPER:
        _, _, exponents = growth_exponents(Fz, tol)
        raise NoSolution(f"F[z] is improper for this AF0; growth exponents\n{np.round(exponents, 2)}")
    logger.debug(f"F[z] is {properness.value}")

    Ft = expand_impulse(Fz, T, tol, check=False)
    Gt = expand_impulse(Gz, T, tol, check=False)
    return Fz, Gz, Ft, Gt


def zero_input(model: ModelCM, ic: InitCond, T: int = DEFAULT_HORIZON,
               tol: ToleranceConfig = DEFAULT_TOLERANCES):
    """Perfect-foresight path xbar_0..xbar_{T+1} from the initial conditions.

    Xbar[z] = D^-1 [z^2 Ahat xhat_{-1} - z A x_{-1},  -z^2 B R] blkdiag(1, zI - R)^-1 [1; u_{-1}].
    Returns (Xbar[z], xbar, consistent); inconsistency is reported, not raised.
    """
    ic.check_dims(model)
    n, m = model.n, model.m
    zero = np.zeros((n, 1 + m))
    low = zero.copy()
    low[:, :1] = -(model.A @ ic.x_prev)[:, None]
    lead = zero.copy()
    lead[:, :1] = (model.Ahat @ ic.xhat_prev)[:, None]
    lead[:, 1:] = -model.B @ model.R
    Xbarz = RationalMatrix(model.characteristic(),
                           MatrixPoly([zero, low, lead]),
                           MatrixPoly.block_diag(MatrixPoly.identity(1), model.shock_filter()),
                           tol=tol)
    if ic.is_zero():
        return Xbarz, np.zeros((T + 2, n)), True

    vector = np.concatenate([[1.0], ic.u_prev])
    proper = classify_properness(Xbarz, tol, vector).is_proper
    xbar = expand_impulse(Xbarz, T + 1, tol, check=False).contract(vector)
    gap = float(np.linalg.norm(xbar[0] - ic.xhat_prev))
    consistent = proper and gap <= tol.consistency * (1.0 + np.linalg.norm(ic.xhat_prev))
    if not consistent:
        logger.info(f"Initial conditions are inconsistent (proper: {proper}, |xbar_0 - xhat_-1| = {gap:.3e})")
    return Xbarz, xbar, consistent


def solve_total(model: ModelCM, AF0: np.ndarray, ic: InitCond = None, T: int = DEFAULT_HORIZON,
                tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Solution:
    """Zero-state plus zero-input solution for the given free parameter."""
    if ic is None:
        ic = InitCond.zeros(model.n, model.m)
    Xbarz, xbar, consistent = zero_input(model, ic, T, tol)
    if not consistent:
        raise InconsistentInitialConditions("No perfect-foresight path matches xhat_{1,-1}")
    Fz, Gz, Ft, Gt = zero_state(model, AF0, T, tol)
    solution = Solution(model, ic, np.atleast_2d(np.asarray(AF0, dtype=float)), Fz, Gz, Ft, Gt, Xbarz, xbar)
    logger.debug(f"Solved to horizon {T}; |G_0 - (AF0 + B)| = "
                 f"{np.max(np.abs(Gt[0] - solution.error_coeff)):.2e}")
    return solution
