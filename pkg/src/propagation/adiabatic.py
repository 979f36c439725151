"""Adiabatic propagation inside the two-dimensional dark subspace.

The dark energies vanish identically, so the adiabatic propagator is pure
holonomy: the ordered product of overlaps between neighbouring dark frames.
"""

import logging

import numpy as np

from src.config import Tolerances, default_tolerances, get_config
from src.linalg.core import adjoint, polar_unitary
from src.model.states import dark_states_from_components
from src.propagation.grid import TimeGrid
from src.pulses.schedule import PulseSchedule
from src.utils.errors import FrameDiscontinuityError, ValidationError

logger = logging.getLogger(__name__)

QUBIT_ROWS = (0, 1)


def dark_frame(schedule: PulseSchedule, times) -> np.ndarray:
    """Columns ``|D1(t)>, |D2(t)>`` as an array of shape ``(n, 4, 2)``."""
    omega, u_p, u_s = schedule.drive_components(np.atleast_1d(np.asarray(times, dtype=float)))
    d1, d2 = dark_states_from_components(omega, u_p, u_s, schedule.omega0)
    return np.stack([d1, d2], axis=-1)


def dark_subspace_propagator(
    schedule: PulseSchedule,
    grid: TimeGrid,
    tolerances: Tolerances | None = None,
) -> np.ndarray:
    """Adiabatic qubit gate on ``span{|1>, |2>}``.

    ``G = prod_k M_k`` with ``M_k = F(t_{k+1})^dagger F(t_k)`` projected back
    to the nearest unitary, then mapped to the bare basis through the frames
    at both ends of the grid.
    """
    tol = tolerances or default_tolerances()
    if schedule.omega0 <= 0:
        raise ValidationError("dark_subspace_propagator needs omega0 > 0")
    frames = dark_frame(schedule, grid.times)
    overlaps = adjoint(frames[1:]) @ frames[:-1]
    if len(overlaps):
        eye = np.eye(2)
        defects = np.max(np.abs(adjoint(overlaps) @ overlaps - eye), axis=(-1, -2))
        worst = int(np.argmax(defects))
        if defects[worst] > tol.frame_defect:
            raise FrameDiscontinuityError(
                f"Dark frame jumps between t = {grid.times[worst]:.6g} and "
                f"{grid.times[worst + 1]:.6g} us (overlap defect {defects[worst]:.3f} > "
                f"{tol.frame_defect}); increase steps"
            )
        overlaps = polar_unitary(overlaps)
    holonomy = np.eye(2, dtype=complex)
    for m in overlaps:
        holonomy = m @ holonomy
    start = frames[0][QUBIT_ROWS, :]
    end = frames[-1][QUBIT_ROWS, :]
    return end @ holonomy @ adjoint(start)


def _default_step(schedule: PulseSchedule) -> float:
    t0, tf = schedule.window()
    return (tf - t0) / get_config().DEFAULT_STEPS


def _aligned(reference: np.ndarray, other: np.ndarray) -> np.ndarray:
    """Rephase each column of ``other`` so that ``<ref_i|other_i>`` is real-positive."""
    overlaps = np.einsum("ai,ai->i", np.conj(reference), other)
    phases = np.ones_like(overlaps)
    nonzero = np.abs(overlaps) > 0
    phases[nonzero] = np.conj(overlaps[nonzero]) / np.abs(overlaps[nonzero])
    return other * phases[None, :]


def dark_connection(
    schedule: PulseSchedule, t: float, dt: float | None = None, align_phases: bool = True
) -> np.ndarray:
    """Connection matrix ``A_ij = <D_i(t)| d/dt |D_j(t)>`` by symmetric difference with ``h = dt/10``."""
    h = (_default_step(schedule) if dt is None else dt) / 10.0
    frames = dark_frame(schedule, [t - h, t, t + h])
    before, here, after = frames
    if align_phases:
        before, after = _aligned(here, before), _aligned(here, after)
    derivative = (after - before) / (2.0 * h)
    return adjoint(here) @ derivative


def nonadiabatic_coupling(schedule: PulseSchedule, t: float, dt: float | None = None) -> complex:
    """``<D2(t)| d/dt |D1(t)>`` with phase-aligned frames."""
    return complex(dark_connection(schedule, t, dt)[1, 0])
