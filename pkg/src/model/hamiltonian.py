"""Time-indexed Hermitian generator shared by all models."""

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from src.linalg.core import adjoint, hermiticity_defect

Frame = Literal["interaction", "rotating-with-beats", "lab-oracle"]


@dataclass(frozen=True)
class HamiltonianModel:
    """A model evaluates ``H(t)`` for a batch of times: ``(n,) -> (n, dim, dim)``.

    ``frame_energies`` is set for lab-frame models; the rotating-frame state is
    ``exp(i diag(frame_energies) t) psi_lab``.
    """

    name: str
    dim: int
    generator: Callable[[np.ndarray], np.ndarray]
    frame: Frame = "interaction"
    labels: tuple[str, ...] = ()
    qubit_indices: tuple[int, int] = (0, 1)
    frame_energies: np.ndarray | None = field(default=None, repr=False)

    def h(self, t: float) -> np.ndarray:
        return self.generator(np.array([float(t)]))[0]

    def h_batch(self, times) -> np.ndarray:
        return self.generator(np.asarray(times, dtype=float))

    def hermiticity_defect(self, times) -> float:
        return hermiticity_defect(self.h_batch(times))

    def to_rotating_frame(self, state: np.ndarray, t: float) -> np.ndarray:
        """Map a lab-frame state (or operator columns) at time ``t`` into the rotating frame."""
        if self.frame_energies is None:
            return np.asarray(state)
        phases = np.exp(1j * self.frame_energies * t)
        state = np.asarray(state)
        return phases * state if state.ndim == 1 else phases[:, None] * state

    def rotating_propagator(self, u_lab: np.ndarray, t0: float, tf: float) -> np.ndarray:
        """``exp(i H0 tf) U_lab exp(-i H0 t0)``; identity map for interaction-frame models."""
        if self.frame_energies is None:
            return u_lab
        left = np.diag(np.exp(1j * self.frame_energies * tf))
        right = adjoint(np.diag(np.exp(1j * self.frame_energies * t0)))
        return left @ u_lab @ right
