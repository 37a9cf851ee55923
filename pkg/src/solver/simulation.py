"""Monte-Carlo paths of a solved model and forecast-error statistics."""

from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from ..model.structures import ModelCM, ShockSpec
from ..utils.config import DEFAULT_PATHS, DEFAULT_TOLERANCES, ToleranceConfig
from ..utils.errors import DimensionError
from ..utils.logger import logger
from .solution import Solution


@dataclass(frozen=True, eq=False)
class PathEnsemble:
    """Simulated paths, each array indexed (path, t, component)."""
    w: np.ndarray
    u: np.ndarray
    x: np.ndarray
    xhat: np.ndarray
    errors: np.ndarray  # x_{t+1} - xhat_{1,t} for t = -1..T-1
    predicted: np.ndarray  # (AF0 + B) w_{t+1}, same indexing
    error_std: np.ndarray  # sqrt(diag(K cov K^T))

    @property
    def paths(self) -> int:
        return self.x.shape[0]

    @property
    def identity_residual(self) -> float:
        """Largest deviation of a realized forecast error from (AF0 + B) w."""
        return float(np.max(np.abs(self.errors - self.predicted))) if self.errors.size else 0.0

    def mean_error(self) -> np.ndarray:
        return self.errors.mean(axis=0)

    def error_bound(self, sigmas: float = 4.0) -> np.ndarray:
        """Sampling band sigmas * sigma_e / sqrt(N) for the mean error."""
        return sigmas * self.error_std / np.sqrt(self.paths) + 1e-9

    def within_bound(self, sigmas: float = 4.0) -> bool:
        return bool(np.all(np.abs(self.mean_error()) <= self.error_bound(sigmas)))


def draw_innovations(shocks: ShockSpec, paths: int, T: int, show_progress: bool = False) -> np.ndarray:
    """Gaussian innovations, one independent substream per path.

    Path p always gets the same draws for a given seed, however many paths
    are requested.
    """
    L = shocks.factor()
    m = L.shape[0]
    streams = np.random.SeedSequence(shocks.seed).spawn(paths)
    w = np.zeros((paths, T + 1, m))
    for p, stream in enumerate(tqdm(streams, desc="Drawing shocks", disable=not show_progress)):
        w[p] = np.random.default_rng(stream).standard_normal((T + 1, m)) @ L.T
    return w


def simulate_paths(model: ModelCM, solution: Solution, shocks: ShockSpec, paths: int = DEFAULT_PATHS,
                   T: int = None, tol: ToleranceConfig = DEFAULT_TOLERANCES,
                   show_progress: bool = False) -> PathEnsemble:
    """Draw innovations, build u, x and xhat, and record the forecast errors."""
    if T is None:
        T = solution.horizon
    if T > solution.horizon:
        raise DimensionError(f"Horizon {T} exceeds the solution horizon {solution.horizon}")
    if shocks.covariance.shape != (model.m, model.m):
        raise DimensionError(f"Covariance must be {model.m}x{model.m}, got {shocks.covariance.shape}")

    w = draw_innovations(shocks, paths, T, show_progress)
    x, xhat, u = solution.respond(w)

    K = solution.error_coeff
    previous = np.concatenate([np.broadcast_to(solution.ic.xhat_prev, (paths, 1, model.n)), xhat[:, :-1]], axis=1)
    errors = x - previous
    predicted = w @ K.T
    error_std = np.sqrt(np.clip(np.diag(K @ shocks.covariance @ K.T), 0.0, None))
    ensemble = PathEnsemble(w, u, x, xhat, errors, predicted, error_std)

    residual = ensemble.identity_residual
    scale = 1.0 + float(np.max(np.abs(x))) if x.size else 1.0
    if residual > tol.consistency * scale:
        logger.warning(f"Forecast-error identity off by {residual:.3e}")
    logger.info(f"Simulated {paths} paths to horizon {T}; identity residual {residual:.2e}")
    return ensemble
