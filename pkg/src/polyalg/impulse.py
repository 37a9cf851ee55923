"""Impulse-response sequences indexed t = 0..T (zero for t < 0)."""

from typing import Sequence, Union

import numpy as np

from ..utils.errors import DimensionError


class ImpulseSeq:
    """Sequence of equally shaped n x m matrices y_0..y_T."""

    def __init__(self, terms: Union[np.ndarray, Sequence[np.ndarray]]):
        terms = np.asarray(terms, dtype=float)
        if terms.ndim == 2:
            terms = terms[:, :, None]
        if terms.ndim != 3:
            raise DimensionError(f"Impulse terms must have shape (T + 1, n, m), got {terms.shape}")
        self._terms = terms
        self._terms.setflags(write=False)

    @classmethod
    def powers(cls, R: np.ndarray, T: int) -> "ImpulseSeq":
        """R^t for t = 0..T, the expansion of [I - R z^-1]^-1."""
        R = np.atleast_2d(np.asarray(R, dtype=float))
        terms = np.zeros((T + 1,) + R.shape)
        terms[0] = np.eye(R.shape[0])
        for t in range(1, T + 1):
            terms[t] = terms[t - 1] @ R
        return cls(terms)

    @property
    def terms(self) -> np.ndarray:
        return self._terms

    @property
    def horizon(self) -> int:
        return self._terms.shape[0] - 1

    @property
    def shape(self):
        return self._terms.shape[1:]

    def __len__(self) -> int:
        return self._terms.shape[0]

    def __getitem__(self, t: int) -> np.ndarray:
        return self._terms[t]

    def term(self, t: int) -> np.ndarray:
        """y_t with the implicit zero outside 0..T."""
        if 0 <= t <= self.horizon:
            return self._terms[t]
        return np.zeros(self.shape)

    def truncate(self, T: int) -> "ImpulseSeq":
        return ImpulseSeq(self._terms[: T + 1])

    def advance(self, k: int) -> "ImpulseSeq":
        """y_{t+k}, t = 0..T-k (left shift; drops the first k terms)."""
        return ImpulseSeq(self._terms[k:])

    def delay(self, k: int) -> "ImpulseSeq":
        """y_{t-k} over the same horizon."""
        out = np.zeros_like(self._terms)
        if k <= self.horizon:
            out[k:] = self._terms[: len(self) - k]
        return ImpulseSeq(out)

    def convolve(self, other: Union["ImpulseSeq", np.ndarray, Sequence[np.ndarray]]) -> "ImpulseSeq":
        """(y * h)_t = sum_tau y_{t - tau} h_tau over this sequence's horizon."""
        h = other.terms if isinstance(other, ImpulseSeq) else np.asarray(other, dtype=float)
        if h.ndim == 2:
            h = h[None]
        if h.shape[1] != self.shape[1]:
            raise DimensionError(f"Cannot convolve {self.shape} with {h.shape[1:]} terms")
        T = self.horizon
        out = np.zeros((T + 1, self.shape[0], h.shape[2]))
        for tau in range(min(len(h), T + 1)):
            out[tau:] += np.einsum("tij,jk->tik", self._terms[: T + 1 - tau], h[tau])
        return ImpulseSeq(out)

    def apply(self, inputs: np.ndarray) -> np.ndarray:
        """Responses sum_tau y_{t - tau} v_tau for input vectors v_0..v_T.

        ``inputs`` may carry leading batch axes: shape (..., T + 1, m).
        """
        inputs = np.asarray(inputs, dtype=float)
        steps = inputs.shape[-2]
        out = np.zeros(inputs.shape[:-1] + (self.shape[0],))
        for tau in range(min(steps, len(self))):
            out[..., tau:, :] += np.einsum("sij,...j->...si", self._terms[: steps - tau], inputs[..., tau, :])
        return out

    def right_power_convolve(self, R: np.ndarray) -> "ImpulseSeq":
        """Right-multiply the transform by [I - R z^-1]^-1."""
        return self.convolve(ImpulseSeq.powers(R, self.horizon))

    def right_power_deconvolve(self, R: np.ndarray) -> "ImpulseSeq":
        """Right-multiply the transform by [I - R z^-1]: y_t - y_{t-1} R."""
        out = self._terms.copy()
        out[1:] -= np.einsum("tij,jk->tik", self._terms[:-1], np.atleast_2d(R))
        return ImpulseSeq(out)

    def contract(self, v: np.ndarray) -> np.ndarray:
        """Vector sequence y_t v, shape (T + 1, n)."""
        return np.einsum("tij,j->ti", self._terms, np.asarray(v, dtype=float))

    def transform(self, z: complex) -> np.ndarray:
        """Truncated z-transform sum_t y_t z^-t."""
        weights = np.power(complex(z), -np.arange(len(self)))
        return np.einsum("t,tij->ij", weights, self._terms)

    def __sub__(self, other: "ImpulseSeq") -> "ImpulseSeq":
        T = min(self.horizon, other.horizon)
        return ImpulseSeq(self._terms[: T + 1] - other.terms[: T + 1])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._terms))) if self._terms.size else 0.0

    def __repr__(self) -> str:
        return f"ImpulseSeq(horizon={self.horizon}, shape={self.shape})"
