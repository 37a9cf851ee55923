from typing import Tuple

import numpy as np

from ..model.structures import ModelCM
from ..utils.config import DEFAULT_TOLERANCES, ToleranceConfig
from ..utils.linalg import range_basis
from ..utils.logger import logger


def split_shock_loading(model: ModelCM, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Tuple[np.ndarray, np.ndarray]:
    """(B_par, B_perp): projections of B onto the column span of Ahat and its complement."""
    U = range_basis(model.Ahat, tol.rank_rtol)
    parallel = U @ (U.T @ model.B)
    return parallel, model.B - parallel


def select_least_squares(model: ModelCM, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """AF0 = -B_par, which leaves the forecast error (AF0 + B) w = B_perp w."""
    parallel, perpendicular = split_shock_loading(model, tol)
    logger.info(f"Least-squares selection: |B_perp| = {np.linalg.norm(perpendicular):.4g}")
    return -parallel
