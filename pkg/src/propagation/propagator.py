"""Midpoint exponential propagator for the time-dependent Schrödinger equation.

Each step applies ``exp(-i H(t_mid) dt)``, which is unitary by construction,
so norms are preserved up to the eigendecomposition round-off.
"""

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from src.config import Tolerances, default_tolerances
from src.linalg.core import chunked, step_unitaries
from src.model.hamiltonian import HamiltonianModel
from src.propagation.grid import TimeGrid
from src.utils.errors import DimensionMismatchError, ValidationError
from src.utils.validators import validate_normalized

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Trajectory:
    """States on every grid point, ``states[k]`` at ``times[k]``."""

    times: np.ndarray
    states: np.ndarray
    stability_ratio: float
    labels: tuple[str, ...] = ()

    @property
    def norms(self) -> np.ndarray:
        """Per-time, per-basis-state amplitude norms ``|c_k(t)|``."""
        return np.abs(self.states)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def max_norm_drift(self) -> float:
        return float(np.max(np.abs(np.linalg.norm(self.states, axis=1) - 1.0)))


@dataclass
class _GuardState:
    max_eig: float = 0.0


def _check_stability(model: HamiltonianModel, grid: TimeGrid, max_eig: float, tol: Tolerances) -> float:
    ratio = grid.dt * max_eig
    if ratio > tol.stability_guard:
        suggested = math.ceil(grid.steps * ratio / tol.stability_guard)
        logger.warning(
            "Stability guard exceeded for %s: dt*max|E| = %.3f > %.2f; use at least %d steps",
            model.name,
            ratio,
            tol.stability_guard,
            suggested,
        )
    return ratio


def iter_step_unitaries(
    model: HamiltonianModel, grid: TimeGrid, tol: Tolerances, guard: _GuardState
) -> Iterator[np.ndarray]:
    for mids in chunked(grid.midpoints):
        unitaries, max_eig = step_unitaries(model.h_batch(mids), grid.dt, tol.hermitian)
        guard.max_eig = max(guard.max_eig, max_eig)
        yield unitaries


def _initial_state(model: HamiltonianModel, psi0: np.ndarray, tol: Tolerances) -> np.ndarray:
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (model.dim,):
        raise DimensionMismatchError(
            f"Initial state has shape {psi0.shape}, model {model.name} needs ({model.dim},)"
        )
    valid, message = validate_normalized(psi0, tol.norm)
    if not valid:
        raise ValidationError(message)
    return psi0


def propagate_state(
    model: HamiltonianModel,
    psi0: np.ndarray,
    grid: TimeGrid,
    tolerances: Tolerances | None = None,
) -> Trajectory:
    """Propagate ``psi0`` across ``grid`` and record the state at every grid point."""
    tol = tolerances or default_tolerances()
    psi0 = _initial_state(model, psi0, tol)

    states = np.empty((grid.steps + 1, model.dim), dtype=complex)
    states[0] = psi0
    psi = psi0
    guard = _GuardState()
    k = 0
    for unitaries in iter_step_unitaries(model, grid, tol, guard):
        for u in unitaries:
            psi = u @ psi
            k += 1
            states[k] = psi
    ratio = _check_stability(model, grid, guard.max_eig, tol)
    logger.debug("Propagated %s over %d steps (dt*max|E| = %.3f)", model.name, grid.steps, ratio)
    return Trajectory(grid.times, states, ratio, model.labels)


def propagate_unitary(
    model: HamiltonianModel,
    grid: TimeGrid,
    tolerances: Tolerances | None = None,
) -> np.ndarray:
    """Ordered product ``U(tf, t0) = U_N ... U_1`` with ``U(t0, t0) = I``."""
    tol = tolerances or default_tolerances()
    total = np.eye(model.dim, dtype=complex)
    guard = _GuardState()
    for unitaries in iter_step_unitaries(model, grid, tol, guard):
        for u in unitaries:
            total = u @ total
    _check_stability(model, grid, guard.max_eig, tol)
    return total


def propagate_state_and_unitary(
    model: HamiltonianModel,
    psi0: np.ndarray,
    grid: TimeGrid,
    tolerances: Tolerances | None = None,
) -> tuple[Trajectory, np.ndarray]:
    """One pass giving both the trajectory of ``psi0`` and the full propagator ``U(tf, t0)``."""
    tol = tolerances or default_tolerances()
    psi0 = _initial_state(model, psi0, tol)

    states = np.empty((grid.steps + 1, model.dim), dtype=complex)
    states[0] = psi0
    total = np.eye(model.dim, dtype=complex)
    guard = _GuardState()
    k = 0
    for unitaries in iter_step_unitaries(model, grid, tol, guard):
        for u in unitaries:
            total = u @ total
            k += 1
            states[k] = total @ psi0
    ratio = _check_stability(model, grid, guard.max_eig, tol)
    return Trajectory(grid.times, states, ratio, model.labels), total
