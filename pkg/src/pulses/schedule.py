"""Pump/Stokes drive schedules.

A schedule is described by a time-dependent envelope ``Omega(t) >= 0`` and a
common phase ``psi(t)``, split into pump and Stokes components by the fixed
angles ``chi`` and ``phi``::

    Omega_p = Omega cos(chi) exp(i phi) exp(i psi)
    Omega_s = Omega sin(chi) exp(-i phi) exp(i psi)

Gaussian (STIRAP) and constant schedules give the two components directly.
All frequencies are angular (rad/µs); times are µs.
"""

import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.special import expit

from src.config import get_config
from src.utils.errors import ValidationError

EnvelopeKind = Literal["designed", "gaussian_stirap", "constant", "custom"]

# Gaussian windows extend this many widths past the outermost pulse center.
GAUSSIAN_WINDOW_WIDTHS = 6.0
CONSTANT_WINDOW_US = (0.0, 1.0)


def wrap_half_turn(angle: float) -> float:
    """Map an angle into ``(-pi/2, pi/2]``; the drive is invariant up to a global sign."""
    return angle - math.pi * math.ceil((angle - math.pi / 2) / math.pi)


class GaussianPulses(BaseModel):
    """Counterintuitively ordered Gaussian pulses ``A exp(-(t - c)^2 / w^2)``."""

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    pump_amplitude: float = Field(..., ge=0, alias="pump_amplitude_MHz_angular")
    pump_center: float = Field(..., alias="pump_center_us")
    pump_width: float = Field(..., gt=0, alias="pump_width_us")
    stokes_amplitude: float = Field(..., ge=0, alias="stokes_amplitude_MHz_angular")
    stokes_center: float = Field(..., alias="stokes_center_us")
    stokes_width: float = Field(..., gt=0, alias="stokes_width_us")


class ConstantPulses(BaseModel):
    """Flat pump and Stokes amplitudes (the selection-rule validation run)."""

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    pump_amplitude: float = Field(..., ge=0, alias="pump_amplitude_MHz_angular")
    stokes_amplitude: float = Field(..., ge=0, alias="stokes_amplitude_MHz_angular")
    pump_phase: float = Field(0.0, alias="pump_phase_rad")
    stokes_phase: float = Field(0.0, alias="stokes_phase_rad")


class CustomTable(BaseModel):
    """Tabulated envelope and phase, linearly interpolated; zero drive outside."""

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    times: tuple[float, ...] = Field(..., alias="times_us")
    omega: tuple[float, ...] = Field(..., alias="omega_MHz_angular")
    psi: tuple[float, ...] = Field(..., alias="psi_rad")

    @model_validator(mode="after")
    def _check_table(self) -> "CustomTable":
        n = len(self.times)
        if n < 2:
            raise ValueError("custom table needs at least 2 rows")
        if len(self.omega) != n or len(self.psi) != n:
            raise ValueError("times, omega and psi columns must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("custom table times must be strictly increasing")
        if min(self.omega) < 0:
            raise ValueError("custom envelope must be non-negative")
        return self


class PulseSchedule(BaseModel):
    """Full drive specification."""

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    chi: float = Field(-math.pi / 4, alias="chi_rad")
    phi: float = Field(0.0, alias="phi_rad")
    omega0: float = Field(20.0, ge=0, alias="omega0_MHz_angular")
    alpha: float = Field(1.0, gt=0, alias="alpha_MHz_angular")
    envelope_kind: EnvelopeKind = "designed"
    gaussian: GaussianPulses | None = None
    constant: ConstantPulses | None = None
    custom: CustomTable | None = None

    @field_validator("chi", "phi")
    @classmethod
    def _principal(cls, value: float) -> float:
        return wrap_half_turn(value)

    @model_validator(mode="after")
    def _check_kind(self) -> "PulseSchedule":
        if self.envelope_kind == "designed" and self.omega0 <= 0:
            raise ValueError("designed envelopes need omega0_MHz_angular > 0")
        if self.envelope_kind == "gaussian_stirap" and self.gaussian is None:
            raise ValueError("envelope_kind 'gaussian_stirap' requires a 'gaussian' block")
        if self.envelope_kind == "constant" and self.constant is None:
            raise ValueError("envelope_kind 'constant' requires a 'constant' block")
        if self.envelope_kind == "custom" and self.custom is None:
            raise ValueError("envelope_kind 'custom' requires a 'custom' block")
        return self

    # ── Envelope ────────────────────────────────────────────────────────

    def envelope(self, t) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(Omega(t), psi(t))`` for any envelope kind."""
        t = np.asarray(t, dtype=float)
        if self.envelope_kind == "designed":
            return designed_envelope(t, self)
        if self.envelope_kind == "custom":
            table = self.custom
            assert table is not None
            omega = np.interp(t, table.times, table.omega, left=0.0, right=0.0)
            psi = np.interp(t, table.times, table.psi)
            return omega, psi
        omega, _, _ = self.drive_components(t)
        return omega, np.zeros_like(t)

    def drive_components(self, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return ``(Omega, u_p, u_s)`` with ``Omega_p = Omega u_p``, ``Omega_s = Omega u_s``.

        ``|u_p|^2 + |u_s|^2 = 1`` everywhere, including where ``Omega = 0``, so
        the dark direction stays defined at the pulse edges.
        """
        t = np.asarray(t, dtype=float)
        if self.envelope_kind == "gaussian_stirap":
            return self._gaussian_components(t)
        if self.envelope_kind == "constant":
            return self._constant_components(t)
        omega, psi = self.envelope(t)
        rotor = np.exp(1j * psi)
        u_p = math.cos(self.chi) * np.exp(1j * self.phi) * rotor
        u_s = math.sin(self.chi) * np.exp(-1j * self.phi) * rotor
        return omega, u_p, u_s

    def _gaussian_components(self, t: np.ndarray):
        g = self.gaussian
        assert g is not None
        log_p = -((t - g.pump_center) ** 2) / g.pump_width**2
        log_s = -((t - g.stokes_center) ** 2) / g.stokes_width**2
        omega_p = g.pump_amplitude * np.exp(log_p)
        omega_s = g.stokes_amplitude * np.exp(log_s)
        omega = np.hypot(omega_p, omega_s)
        if g.pump_amplitude == 0 and g.stokes_amplitude == 0:
            theta = np.zeros_like(t)
        elif g.pump_amplitude == 0:
            theta = np.full_like(t, math.pi / 2)
        elif g.stokes_amplitude == 0:
            theta = np.zeros_like(t)
        else:
            # tan(theta) = Omega_s / Omega_p evaluated in the log domain, finite in the tails
            ratio = math.log(g.stokes_amplitude / g.pump_amplitude) + log_s - log_p
            theta = np.arctan(np.exp(np.clip(ratio, -700.0, 700.0)))
        return omega, np.cos(theta).astype(complex), np.sin(theta).astype(complex)

    def _constant_components(self, t: np.ndarray):
        c = self.constant
        assert c is not None
        omega_p = c.pump_amplitude * np.exp(1j * c.pump_phase)
        omega_s = c.stokes_amplitude * np.exp(1j * c.stokes_phase)
        amplitude = math.hypot(c.pump_amplitude, c.stokes_amplitude)
        if amplitude > 0:
            u_p, u_s = omega_p / amplitude, omega_s / amplitude
        else:
            u_p = math.cos(self.chi) * np.exp(1j * self.phi)
            u_s = math.sin(self.chi) * np.exp(-1j * self.phi)
        ones = np.ones_like(t)
        return amplitude * ones, u_p * ones.astype(complex), u_s * ones.astype(complex)

    # ── Window ──────────────────────────────────────────────────────────

    def window(self, factor: float | None = None) -> tuple[float, float]:
        """Default integration window ``(t0, tf)`` in µs."""
        if self.envelope_kind == "designed":
            factor = get_config().WINDOW_FACTOR if factor is None else factor
            half = factor / self.alpha
            return -half, half
        if self.envelope_kind == "gaussian_stirap":
            g = self.gaussian
            assert g is not None
            reach = GAUSSIAN_WINDOW_WIDTHS * max(g.pump_width, g.stokes_width)
            return min(g.pump_center, g.stokes_center) - reach, max(
                g.pump_center, g.stokes_center
            ) + reach
        if self.envelope_kind == "custom":
            assert self.custom is not None
            return self.custom.times[0], self.custom.times[-1]
        return CONSTANT_WINDOW_US

    def with_updates(self, **changes) -> "PulseSchedule":
        """Validated copy with short-name field overrides."""
        data = self.model_dump()
        data.update(changes)
        return PulseSchedule.model_validate(data)


# ── Designed adiabatic path ─────────────────────────────────────────────


def eta(t, alpha: float):
    """Ramp angle ``(pi/2)(1 + tanh(alpha t))`` in ``[0, pi]``."""
    # 1 + tanh(x) == 2 expit(2x), without the cancellation near x -> -inf
    value = math.pi * expit(2.0 * alpha * np.asarray(t, dtype=float))
    return float(value) if np.ndim(value) == 0 else value


def designed_envelope(t, schedule: PulseSchedule) -> tuple[np.ndarray, np.ndarray]:
    """Designed envelope and phase.

    ``Omega = sqrt(3) omega0 sin(eta) / sqrt(2 - 1.5 sin^2 eta)`` and
    ``psi = pi/2 - atan2(2 cos eta, sin eta)``. The two-argument arctangent
    selects the continuous branch with ``psi = 0`` at ``eta = 0`` and
    ``psi = pi`` at ``eta = pi``; both ends evaluate without division.
    """
    if schedule.omega0 <= 0:
        raise ValidationError("designed_envelope requires omega0 > 0")
    angle = np.asarray(eta(t, schedule.alpha), dtype=float)
    s = np.sin(angle)
    c = np.cos(angle)
    omega = math.sqrt(3.0) * schedule.omega0 * s / np.sqrt(2.0 - 1.5 * s**2)
    psi = math.pi / 2 - np.arctan2(2.0 * c, s)
    return omega, psi


def pump_stokes(t, schedule: PulseSchedule) -> tuple[np.ndarray, np.ndarray]:
    """Return the complex pump and Stokes Rabi frequencies at ``t``."""
    omega, u_p, u_s = schedule.drive_components(t)
    return omega * u_p, omega * u_s
