"""Zero-state solver for models with forecasts of any horizon and lag.

The model is sum_{i<=h, j<=l} A_ij xhat_{i,t-j} = B u_t with xhat_{0,t} = x_t.
Solutions are w-driven: xhat_{i,t} = sum_tau F~_{i,t-tau} w_tau, and model
consistency ties every forecast kernel to G~ through F~_{i,t} = G~_{t+i}, t >= 0.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np

from ..model.structures import GeneralModel, check_general_regular
from ..polyalg.impulse import ImpulseSeq
from ..polyalg.matrix_poly import MatrixPoly
from ..polyalg.rational import Properness, RationalMatrix, classify_properness, expand_impulse
from ..utils.config import DEFAULT_HORIZON, DEFAULT_TOLERANCES, ToleranceConfig
from ..utils.errors import DimensionError, NoSolution, NotRegular
from ..utils.logger import logger


@dataclass(frozen=True, eq=False)
class GeneralFreeParams:
    """F~_{i,0} for 0 < i < h and the product A_h0 F~_{h,0}."""
    initial_forecasts: Sequence[np.ndarray]
    lead_product: np.ndarray

    @classmethod
    def zeros(cls, model: GeneralModel) -> "GeneralFreeParams":
        shape = (model.n, model.m)
        return cls([np.zeros(shape) for _ in range(model.h - 1)], np.zeros(shape))

    def check_dims(self, model: GeneralModel) -> None:
        shape = (model.n, model.m)
        if len(self.initial_forecasts) != model.h - 1:
            raise DimensionError(f"Need {model.h - 1} initial forecasts, got {len(self.initial_forecasts)}")
        for i, F in enumerate(self.initial_forecasts, start=1):
            if np.shape(F) != shape:
                raise DimensionError(f"F_{i} must be {shape}, got {np.shape(F)}")
        if np.shape(self.lead_product) != shape:
            raise DimensionError(f"The lead product must be {shape}, got {np.shape(self.lead_product)}")


@dataclass(frozen=True, eq=False)
class GeneralSolution:
    model: GeneralModel
    free_params: GeneralFreeParams
    Gz: RationalMatrix
    Gt: ImpulseSeq
    Fiz: Dict[int, RationalMatrix]
    Fit: Dict[int, ImpulseSeq]  # F~_{i,t}, 1 <= i <= h
    well_posed: bool = field(default=False)

    @property
    def horizon(self) -> int:
        return self.Gt.horizon

    def forecast_kernel(self, i: int, j: int = 0) -> ImpulseSeq:
        """Kernel of xhat_{i,t-j}: F~_{ij,t} = 1_{t-j} G~_{t+i-j}."""
        base = self.Gt if i == 0 else self.Fit[i]
        return base.delay(j)

    def forecast_error(self, i: int, j: int, w: np.ndarray, t: int) -> np.ndarray:
        """x_{t+i-j} - xhat_{i,t-j} = sum_{tau=t-j+1}^{t+i-j} G~_{t+i-j-tau} w_tau."""
        w = np.atleast_2d(np.asarray(w, dtype=float))
        target = t + i - j
        out = np.zeros(self.model.n)
        for tau in range(max(t - j + 1, 0), min(target, w.shape[0] - 1) + 1):
            out += self.Gt.term(target - tau) @ w[tau]
        return out

    def respond(self, w: np.ndarray) -> np.ndarray:
        """Zero-state x_t for innovations w_0..w_T'."""
        return self.Gt.apply(w)


def _constant_term(M: np.ndarray, power: int) -> MatrixPoly:
    return MatrixPoly.constant(M).shift(power)


def solve_general(model: GeneralModel, free_params: Optional[GeneralFreeParams] = None,
                  T: int = DEFAULT_HORIZON, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> GeneralSolution:
    """Kernels G~ and F~_i for given free parameters.

    G~[z] = D^-1 N' (zI - R)^-1 with D[z] = sum z^{i+l-j} A_ij and
    N' = sum_{i>=1, j, k<i} A_ij z^{i+l-j-k} G~_k (zI - R) + z^{l+1} B.

    Raises:
        NotRegular: D[z] is singular
        NoSolution: F~_h[z] is improper for these free parameters
    """
    if free_params is None:
        free_params = GeneralFreeParams.zeros(model)
    free_params.check_dims(model)
    if not check_general_regular(model, tol):
        raise NotRegular("D[z] = sum z^{i+l-j} A_ij is not regular")
    h, l, n, m = model.h, model.l, model.n, model.m

    head = [np.asarray(F, dtype=float) for F in free_params.initial_forecasts]
    G0 = model.B - np.asarray(free_params.lead_product, dtype=float)
    for i, F in enumerate(head, start=1):
        G0 = G0 - model.coefficient(i, 0) @ F
    known = [G0] + head  # G~_0..G~_{h-1}

    D = model.denominator()
    shock = MatrixPoly([-model.R, np.eye(m)])
    carried = MatrixPoly.zeros(n, m)
    for (i, j), Aij in model.coeffs.items():
        for k in range(i):
            carried = carried + _constant_term(Aij @ known[k], i + l - j - k)
    num = carried @ shock + _constant_term(model.B, l + 1)
    Gz = RationalMatrix(D, num, shock, tol=tol)

    Fiz = {}
    for i in range(1, h + 1):
        head_poly = MatrixPoly.zeros(n, m)
        for k in range(i):
            head_poly = head_poly + _constant_term(known[k], i - k)
        Fiz[i] = RationalMatrix(D, num.shift(i) - D @ head_poly @ shock, shock, tol=tol)

    if classify_properness(Fiz[h], tol) is Properness.IMPROPER:
        raise NoSolution(f"F~_{h}[z] is improper for these free parameters")

    lift = MatrixPoly.shift_identity(n, h + l - 1)
    well_posed = classify_properness(RationalMatrix(D, lift, tol=tol), tol).is_proper
    logger.debug(f"General model h={h}, l={l}: existence for all free parameters: {well_posed}")

    # F~_{i,t} = G~_{t+i}, read off one longer expansion
    extended = expand_impulse(Gz, T + h, tol, check=False)
    Gt = extended.truncate(T)
    Fit = {i: extended.advance(i).truncate(T) for i in Fiz}
    return GeneralSolution(model, free_params, Gz, Gt, Fiz, Fit, well_posed)
