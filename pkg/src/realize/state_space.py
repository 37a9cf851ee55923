from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..polyalg.impulse import ImpulseSeq
from ..utils.errors import DimensionError, DimensionMismatch


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Discrete-time realization x_{t+1} = A x_t + B u_t, y_t = C x_t + D u_t."""
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        D = np.atleast_2d(np.asarray(self.D, dtype=float))
        n, m = D.shape
        A = np.asarray(self.A, dtype=float)
        A = A.reshape(0, 0) if A.size == 0 else np.atleast_2d(A)
        k = A.shape[0]
        if A.shape != (k, k):
            raise DimensionError(f"State matrix must be square, got {A.shape}")
        try:
            B = np.asarray(self.B, dtype=float).reshape(k, m)
            C = np.asarray(self.C, dtype=float).reshape(n, k)
        except ValueError as e:
            raise DimensionError(f"Inconsistent realization shapes: {e}") from e
        for name, value in (("A", A), ("B", B), ("C", C), ("D", D)):
            object.__setattr__(self, name, value)

    @classmethod
    def static(cls, D: np.ndarray) -> "StateSpace":
        """Pure feedthrough system (order 0)."""
        D = np.atleast_2d(np.asarray(D, dtype=float))
        n, m = D.shape
        return cls(np.zeros((0, 0)), np.zeros((0, m)), np.zeros((n, 0)), D)

    @property
    def order(self) -> int:
        return self.A.shape[0]

    @property
    def outputs(self) -> int:
        return self.D.shape[0]

    @property
    def inputs(self) -> int:
        return self.D.shape[1]

    def poles(self) -> np.ndarray:
        if self.order == 0:
            return np.zeros(0, dtype=complex)
        return np.linalg.eigvals(self.A)

    def spectral_radius(self) -> float:
        poles = self.poles()
        return float(np.max(np.abs(poles))) if poles.size else 0.0


def ss_impulse(S: StateSpace, T: int):
    """Markov parameters D, CB, CAB, ... up to t = T."""
    terms = np.zeros((T + 1, S.outputs, S.inputs))
    terms[0] = S.D
    if S.order:
        AkB = S.B
        for t in range(1, T + 1):
            terms[t] = S.C @ AkB
            AkB = S.A @ AkB
    return ImpulseSeq(terms)


def ss_simulate(S: StateSpace, inputs: np.ndarray, x0: Optional[np.ndarray] = None) -> np.ndarray:
    """Outputs y_0..y_{T-1} for inputs u_0..u_{T-1} from state x0."""
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim == 1:
        inputs = inputs.reshape(-1, 1) if S.inputs == 1 else inputs.reshape(1, -1)
    if inputs.ndim != 2 or inputs.shape[1] != S.inputs or inputs.shape[0] < 1:
        raise DimensionMismatch(f"Expected inputs of shape (T >= 1, {S.inputs}), got {inputs.shape}")
    x = np.zeros(S.order) if x0 is None else np.asarray(x0, dtype=float)
    if x.shape != (S.order,):
        raise DimensionMismatch(f"Initial state must have length {S.order}, got {x.shape}")

    outputs = np.zeros((inputs.shape[0], S.outputs))
    for t, u in enumerate(inputs):
        outputs[t] = S.C @ x + S.D @ u
        x = S.A @ x + S.B @ u
    return outputs
