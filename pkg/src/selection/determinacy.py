"""Selection of AF0 by cancelling every unstable pole of G[z].

For each unstable eigenvalue lambda of [z^2 Ahat - zI + A] with left vector c,
the numerator z [Ahat K (zI - R) - B] must vanish along c at lambda, which is
the linear condition

    c Ahat K = c B (lambda I - R)^-1,    K = AF0 + B.

Writing AF0 = U_r Q with U_r an orthonormal basis of the column span of Ahat
turns the conditions into (C Ahat U_r) Q = C B (lambda I - R)^-1 - C Ahat B.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from scipy import linalg

from ..model.structures import ModelCM, check_regular
from ..polyalg.matrix_poly import left_nullvector, polyeig
from ..realize.minimal import minimal_realization
from ..solver.solution import zero_state
from ..utils.config import DEFAULT_TOLERANCES, ToleranceConfig
from ..utils.errors import DefectiveUnstable, EigenvalueOnR, NoSolution, NotRegular
from ..utils.linalg import numerical_rank, range_basis
from ..utils.logger import logger


class Determinacy(str, Enum):
    DETERMINATE = "Determinate"
    INDETERMINATE = "Indeterminate"
    NO_STABLE_SOLUTION = "NoStableSolution"
    BOUNDARY = "Boundary"


@dataclass(frozen=True, eq=False)
class DeterminacyReport:
    classification: Determinacy
    AF0: Optional[np.ndarray]
    unstable_eigs: np.ndarray
    left_vecs: List[np.ndarray]
    residual: float
    constraint_rank: int = 0
    realized_order: Optional[int] = None
    realized_poles: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    @property
    def is_determinate(self) -> bool:
        return self.classification is Determinacy.DETERMINATE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "classification": self.classification.value,
            "AF0": self.AF0,
            "unstable_eigs": self.unstable_eigs,
            "left_vecs": self.left_vecs,
            "residual": self.residual,
            "constraint_rank": self.constraint_rank,
            "realized_order": self.realized_order,
            "realized_poles": self.realized_poles,
        }


def _representatives(unstable: np.ndarray, tol: ToleranceConfig) -> List[np.ndarray]:
    """Clusters of repeated eigenvalues, one per conjugate pair (Im >= 0)."""
    clusters: List[List[complex]] = []
    for lam in unstable:
        if lam.imag < -tol.boundary * (1.0 + abs(lam)):
            continue
        for cluster in clusters:
            if abs(cluster[0] - lam) <= tol.boundary * (1.0 + abs(lam)):
                cluster.append(lam)
                break
        else:
            clusters.append([lam])
    return [np.array(c) for c in clusters]


def _left_vectors(model: ModelCM, lam: complex, multiplicity: int, tol: ToleranceConfig) -> List[np.ndarray]:
    P = model.characteristic()(lam)
    if multiplicity == 1:
        return [left_nullvector(P, tol)]
    U, s, _ = linalg.svd(P)
    nullity = int(np.sum(s <= tol.null_rtol * s[0]))
    if nullity < multiplicity:
        raise DefectiveUnstable(f"Unstable eigenvalue {lam:.6g} has multiplicity {multiplicity} "
                                f"but only {nullity} left eigenvectors")
    return [U[:, -k].conj() for k in range(1, multiplicity + 1)]


def select_stability(model: ModelCM, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> DeterminacyReport:
    """Classify the model and, when determinate, return the stabilizing AF0.

    Raises:
        NotRegular: the characteristic matrix is singular
        EigenvalueOnR: an unstable eigenvalue coincides with an eigenvalue of R
        DefectiveUnstable: a repeated unstable eigenvalue lacks a full eigenspace
    """
    if not check_regular(model, tol):
        raise NotRegular("[z^2 Ahat - zI + A] is not regular")
    eigs = polyeig(model.characteristic(), tol)
    finite = eigs.finite
    unstable = eigs.unstable(tol.unit_circle)
    logger.info(f"Unstable eigenvalues: {np.array2string(unstable, precision=7)}")

    if np.any(np.abs(np.abs(finite) - 1.0) < tol.boundary):
        logger.info("Eigenvalue on the unit circle; no classification attempted")
        return DeterminacyReport(Determinacy.BOUNDARY, None, unstable, [], 0.0)

    U_r = range_basis(model.Ahat, tol.rank_rtol)
    r = U_r.shape[1]
    if unstable.size == 0:
        return DeterminacyReport(Determinacy.INDETERMINATE, None, unstable, [], 0.0)

    spec_R = np.linalg.eigvals(model.R)
    for lam in unstable:
        if spec_R.size and np.min(np.abs(spec_R - lam)) <= tol.boundary * (1.0 + abs(lam)):
            raise EigenvalueOnR(f"Unstable eigenvalue {lam:.6g} is an eigenvalue of R")

    m = model.m
    rows, rhs, vectors = [], [], []
    for cluster in _representatives(unstable, tol):
        lam = complex(np.mean(cluster))
        shifted = linalg.solve(lam * np.eye(m) - model.R, np.eye(m))
        for c in _left_vectors(model, lam, cluster.size, tol):
            vectors.append(c)
            row = c @ model.Ahat @ U_r
            target = c @ model.B @ shifted - c @ model.Ahat @ model.B
            if abs(lam.imag) <= tol.boundary * (1.0 + abs(lam)):
                rows.append(row.real)
                rhs.append(target.real)
            else:
                rows.extend([row.real, row.imag])
                rhs.extend([target.real, target.imag])
    M = np.array(rows)
    RHS = np.array(rhs)

    Q, *_ = linalg.lstsq(M, RHS)
    residual = float(np.linalg.norm(M @ Q - RHS))
    rank = numerical_rank(M, tol.rank_rtol)
    scale = 1.0 + np.linalg.norm(RHS) + np.linalg.norm(M)
    logger.debug(f"Cancellation system {M.shape}, rank {rank} of {r}, residual {residual:.3e}")
    if residual > tol.exist_rtol * scale:
        return DeterminacyReport(Determinacy.NO_STABLE_SOLUTION, None, unstable, vectors, residual, rank)
    if rank < r:
        return DeterminacyReport(Determinacy.INDETERMINATE, None, unstable, vectors, residual, rank)

    AF0 = U_r @ Q
    try:
        _, Gz, _, _ = zero_state(model, AF0, 1, tol)
    except NoSolution as e:
        logger.warning(f"Selected AF0 admits no solution: {e}")
        return DeterminacyReport(Determinacy.NO_STABLE_SOLUTION, None, unstable, vectors, residual, rank)
    system = minimal_realization(Gz, tol=tol)
    poles = system.poles()
    if system.spectral_radius() >= 1.0:
        logger.warning(f"Selected G[z] keeps poles outside the unit disk: {np.array2string(poles, precision=7)}")
        return DeterminacyReport(Determinacy.NO_STABLE_SOLUTION, None, unstable, vectors, residual, rank,
                                 system.order, poles)
    logger.info(f"Determinate; realized G[z] has order {system.order}")
    return DeterminacyReport(Determinacy.DETERMINATE, AF0, unstable, vectors, residual, rank, system.order, poles)
