"""Eigenvalue loci of [z^2 eps Ahat - zI + A] as the forecast gain eps varies."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import linalg
from scipy.optimize import linear_sum_assignment
from tqdm import tqdm

from ..model.builders import NK_CALIBRATION, NKParams, build_nk
from ..model.structures import ModelCM
from ..polyalg.matrix_poly import EigenSet, polyeig
from ..utils.config import DEFAULT_TOLERANCES, MAX_WORKERS, ToleranceConfig
from ..utils.errors import InvariantError, RatexpError, SingularAhat
from ..utils.logger import logger


@dataclass(frozen=True, eq=False)
class GainSweepResult:
    epsilons: np.ndarray
    loci: List[np.ndarray]  # matched finite eigenvalues; NaN where a locus has no value
    infinite_counts: List[int]
    failures: Dict[int, str] = field(default_factory=dict)

    def width(self) -> int:
        return max((len(l) for l in self.loci), default=0)

    def table(self) -> np.ndarray:
        """Rows eps, Re l_0, Im l_0, Re l_1, ... padded with NaN."""
        k = self.width()
        out = np.full((len(self.epsilons), 1 + 2 * k), np.nan)
        out[:, 0] = self.epsilons
        for row, locus in enumerate(self.loci):
            out[row, 1: 1 + 2 * len(locus): 2] = locus.real
            out[row, 2: 2 + 2 * len(locus): 2] = locus.imag
        return out


def _eigenvalues(model: ModelCM, eps: float, tol: ToleranceConfig) -> EigenSet:
    return polyeig(model.characteristic(eps), tol)


def _match(previous: Optional[np.ndarray], current: np.ndarray) -> np.ndarray:
    """Reorder current so each entry continues the nearest previous locus."""
    if previous is None or current.size == 0:
        return current
    valid = np.flatnonzero(~np.isnan(previous))
    ordered = np.full(previous.size, np.nan, dtype=complex)
    taken = np.zeros(0, dtype=int)
    if valid.size:
        cost = np.abs(previous[valid][:, None] - current[None, :])
        rows, cols = linear_sum_assignment(cost)
        ordered[valid[rows]] = current[cols]
        taken = cols
    rest = np.setdiff1d(np.arange(current.size), taken)
    return np.concatenate([ordered, current[rest]])


def gain_sweep(model: ModelCM, eps_grid: Sequence[float], include_zero: bool = False,
               tol: ToleranceConfig = DEFAULT_TOLERANCES, max_workers: int = MAX_WORKERS,
               show_progress: bool = False) -> GainSweepResult:
    """Finite eigenvalues at every grid point, matched into continuous loci.

    eps = 0 uses the degree-one polynomial -zI + A. Grid points where the
    polynomial is singular are recorded in ``failures`` and the sweep continues.
    """
    eps = np.asarray(eps_grid, dtype=float).ravel()
    if np.any(eps < 0.0):
        raise InvariantError("Gain values must be nonnegative")
    if include_zero and (eps.size == 0 or eps[0] != 0.0):
        eps = np.concatenate([[0.0], eps])

    def evaluate(value: float):
        try:
            return _eigenvalues(model, value, tol)
        except RatexpError as e:
            return e

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(tqdm(pool.map(evaluate, eps), total=eps.size, desc="Gain sweep", disable=not show_progress))

    loci, infinite_counts, failures = [], [], {}
    previous = None
    for index, (value, result) in enumerate(zip(eps, results)):
        if isinstance(result, Exception):
            logger.warning(f"Gain {value:.3g}: {type(result).__name__}: {result}")
            failures[index] = f"{type(result).__name__}: {result}"
            loci.append(np.zeros(0, dtype=complex))
            infinite_counts.append(-1)
            continue
        matched = _match(previous, result.finite.astype(complex))
        loci.append(matched)
        infinite_counts.append(result.infinite_count)
        previous = matched
    logger.info(f"Gain sweep over {eps.size} points, {len(failures)} failures")
    return GainSweepResult(eps, loci, infinite_counts, failures)


def eig_bound_large_gain(model: ModelCM, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """Bound (1 + sqrt(1 + 4 s |A|)) / (2 s) on every finite eigenvalue, s = 1 / |Ahat^-1|.

    Norms are spectral norms, so s is the smallest singular value of Ahat.

    Raises:
        SingularAhat: Ahat is numerically singular
    """
    s = linalg.svd(model.Ahat, compute_uv=False)
    if s[-1] <= tol.rank_rtol * s[0]:
        raise SingularAhat("The large-gain bound needs a nonsingular Ahat")
    smallest = float(s[-1])
    norm_A = float(np.linalg.norm(model.A, 2))
    return (1.0 + np.sqrt(1.0 + 4.0 * smallest * norm_A)) / (2.0 * smallest)


def stability_region(psi1_grid: Sequence[float], psi2_grid: Sequence[float], sign_fix: bool = False,
                     base: NKParams = NK_CALIBRATION,
                     tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Spectral radius of [z^2 Ahat - zI + A] over Taylor-rule coefficients.

    Entry (i, j) belongs to psi1_grid[i], psi2_grid[j]; NaN marks a failed build.
    """
    out = np.full((len(psi1_grid), len(psi2_grid)), np.nan)
    for i, psi1 in enumerate(psi1_grid):
        for j, psi2 in enumerate(psi2_grid):
            try:
                model = build_nk(replace(base, psi1=float(psi1), psi2=float(psi2), sign_fix=sign_fix))
                out[i, j] = polyeig(model.characteristic(), tol).spectral_radius()
            except RatexpError as e:
                logger.warning(f"psi1={psi1:.3g}, psi2={psi2:.3g}: {e}")
    return out
