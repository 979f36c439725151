"""Bloch-sphere path of the second dark state and its geometric phase."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from src.config import get_config
from src.propagation.grid import TimeGrid
from src.pulses.schedule import PulseSchedule
from src.utils.errors import PathClosureError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlochPath:
    """Sampled path: mixing angle ``tan(mix) = Omega / (sqrt(2) omega0)`` and azimuth ``psi``."""

    times: np.ndarray
    mix_angle: np.ndarray
    azimuth: np.ndarray

    def closure_defect(self) -> float:
        if len(self.mix_angle) == 0:
            return 0.0
        return float(max(abs(self.mix_angle[0]), abs(self.mix_angle[-1])))

    def reversed(self) -> "BlochPath":
        """Same curve traversed backwards."""
        return BlochPath(-self.times[::-1], self.mix_angle[::-1], self.azimuth[::-1])

    def subsampled(self, stride: int) -> "BlochPath":
        """Every ``stride``-th sample, always keeping the last one."""
        idx = np.arange(0, len(self.times), stride)
        if idx[-1] != len(self.times) - 1:
            idx = np.append(idx, len(self.times) - 1)
        return BlochPath(self.times[idx], self.mix_angle[idx], self.azimuth[idx])


def default_path_grid(schedule: PulseSchedule) -> TimeGrid:
    t0, tf = schedule.window()
    return TimeGrid(t0, tf, get_config().PATH_SAMPLES - 1)


def path_angles(schedule: PulseSchedule, grid: TimeGrid | np.ndarray | None = None) -> BlochPath:
    """Sample the Bloch path on ``grid`` (a :class:`TimeGrid` or an increasing time array)."""
    if schedule.omega0 <= 0:
        raise ValidationError(
            "path_angles needs omega0 > 0; the resonant case has no holonomy parametrization"
        )
    if grid is None:
        grid = default_path_grid(schedule)
    times = grid.times if isinstance(grid, TimeGrid) else np.asarray(grid, dtype=float)
    omega, psi = schedule.envelope(times)
    mix = np.arctan(np.asarray(omega) / (np.sqrt(2.0) * schedule.omega0))
    return BlochPath(times, mix, np.unwrap(np.asarray(psi, dtype=float)))


def _line_integral(path: BlochPath) -> float:
    # (1 - cos 2x) / 2 == sin^2 x
    return float(trapezoid(np.sin(path.mix_angle) ** 2, path.azimuth))


def geometric_phase(path: BlochPath, closure_tol: float | None = None) -> float:
    """Gate phase ``(1/2) * closed integral of (1 - cos 2 mix) d psi`` (half the signed solid angle)."""
    tol = get_config().CLOSURE_TOL if closure_tol is None else closure_tol
    defect = path.closure_defect()
    if defect > tol:
        raise PathClosureError(
            f"Bloch path is not closed: endpoint mixing angle {defect:.3e} rad exceeds {tol:.1e}"
        )
    return _line_integral(path)


def geometric_phase_estimate(
    path: BlochPath, closure_tol: float | None = None
) -> tuple[float, float]:
    """Return ``(gamma, error_estimate)``; the estimate compares against half the samples."""
    gamma = geometric_phase(path, closure_tol)
    coarse = _line_integral(path.subsampled(2))
    error = abs(gamma - coarse)
    logger.debug("Geometric phase %.12f rad (quadrature estimate %.2e)", gamma, error)
    return gamma, error
