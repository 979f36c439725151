"""Four-level double-Lambda model: interaction picture and lab-frame oracle."""

import math
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.model.hamiltonian import HamiltonianModel
from src.pulses.schedule import PulseSchedule

FOUR_LEVEL_LABELS = ("1", "2", "3", "4")
TRANSITIONS = ("p1", "p2", "s1", "s2")


class RabiOverride(BaseModel):
    """Per-transition multiplier ``scale * exp(i phase)`` on the slaved Rabi frequency."""

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    scale: float = 1.0
    phase: float = Field(0.0, alias="phase_rad")

    @property
    def factor(self) -> complex:
        return self.scale * complex(math.cos(self.phase), math.sin(self.phase))


@dataclass(frozen=True)
class FourLevelParams:
    """Detunings plus the four Rabi functions, all slaved to one schedule.

    ``delta1``/``delta2`` default to the schedule's ``omega0`` (the dark-state
    working point).
    """

    schedule: PulseSchedule
    delta1: float | None = None
    delta2: float | None = None
    overrides: dict[str, RabiOverride] = field(default_factory=dict)

    @property
    def d1(self) -> float:
        return self.schedule.omega0 if self.delta1 is None else self.delta1

    @property
    def d2(self) -> float:
        return self.schedule.omega0 if self.delta2 is None else self.delta2

    def factor(self, transition: str) -> complex:
        override = self.overrides.get(transition)
        return 1.0 + 0j if override is None else override.factor

    def rabi(self, t) -> dict[str, np.ndarray]:
        """Complex ``Omega_p1, Omega_p2, Omega_s1, Omega_s2`` at ``t``."""
        omega, u_p, u_s = self.schedule.drive_components(t)
        omega_p, omega_s = omega * u_p, omega * u_s
        return {
            "p1": self.factor("p1") * omega_p,
            "p2": self.factor("p2") * omega_p,
            "s1": self.factor("s1") * omega_s,
            "s2": self.factor("s2") * omega_s,
        }


def four_level_matrix(p1, p2, s1, s2, delta1: float, delta2: float) -> np.ndarray:
    """Interaction-picture matrix from Rabi values; batched over leading axes."""
    p1, p2, s1, s2 = np.broadcast_arrays(*(np.asarray(x, dtype=complex) for x in (p1, p2, s1, s2)))
    h = np.zeros(p1.shape + (4, 4), dtype=complex)
    h[..., 0, 2] = 0.5j * p1
    h[..., 0, 3] = 0.5j * p2
    h[..., 1, 2] = -0.5j * s1
    h[..., 1, 3] = -0.5j * s2
    h[..., 2, 0] = np.conj(h[..., 0, 2])
    h[..., 3, 0] = np.conj(h[..., 0, 3])
    h[..., 2, 1] = np.conj(h[..., 1, 2])
    h[..., 3, 1] = np.conj(h[..., 1, 3])
    h[..., 2, 2] = delta1
    h[..., 3, 3] = -delta2
    return h


def four_level_h(t, params: FourLevelParams) -> np.ndarray:
    """Rotating-wave Hamiltonian; a scalar ``t`` gives ``(4, 4)``, an array ``(n, 4, 4)``."""
    r = params.rabi(t)
    return four_level_matrix(r["p1"], r["p2"], r["s1"], r["s2"], params.d1, params.d2)


def four_level_model(params: FourLevelParams) -> HamiltonianModel:
    return HamiltonianModel(
        name="four_level",
        dim=4,
        generator=lambda times: four_level_h(times, params),
        frame="interaction",
        labels=FOUR_LEVEL_LABELS,
    )


# ── Lab-frame oracle ────────────────────────────────────────────────────


@dataclass(frozen=True)
class LabCarriers:
    """Bare energies ``omega_1..omega_4`` and the four carrier frequencies (rad/µs)."""

    energies: tuple[float, float, float, float]
    nu_p1: float
    nu_p2: float
    nu_s1: float
    nu_s2: float
    counter_rotating: bool = True

    @classmethod
    def surrogate(
        cls, carrier: float, delta1: float, delta2: float, counter_rotating: bool = True
    ) -> "LabCarriers":
        """Desk-scale carriers: ground levels at 0, excited levels near ``carrier`` and ``2 carrier``."""
        return cls(
            energies=(0.0, 0.0, carrier + delta1, 2.0 * carrier - delta2),
            nu_p1=carrier,
            nu_p2=2.0 * carrier,
            nu_s1=carrier,
            nu_s2=2.0 * carrier,
            counter_rotating=counter_rotating,
        )

    def frame_energies(self, delta1: float, delta2: float) -> np.ndarray:
        """Diagonal of the rotating-frame generator ``H0``."""
        w1, w2, w3, w4 = self.energies
        return np.array([w1, w2, w3 - delta1, w4 + delta2])


def _tone(g: np.ndarray, nu: float, t: np.ndarray, counter_rotating: bool) -> np.ndarray:
    term = g * np.exp(1j * nu * t)
    if counter_rotating:
        term = term + np.conj(g) * np.exp(-1j * nu * t)
    return term


def lab_frame_h(t, params: FourLevelParams, carriers: LabCarriers) -> np.ndarray:
    """Lab-frame Hamiltonian with both tones of each field on both legs.

    The ``<1|H|3>`` pump term is ``(i/2) Omega_p1 e^{+i nu_p1 t}`` so that the
    rotating frame reproduces :func:`four_level_h`; the second pump tone enters
    with a relative minus sign.
    """
    t = np.asarray(t, dtype=float)
    r = params.rabi(t)
    cr = carriers.counter_rotating
    pump = _tone(0.5j * r["p1"], carriers.nu_p1, t, cr) - _tone(0.5j * r["p2"], carriers.nu_p2, t, cr)
    stokes = -(_tone(0.5j * r["s1"], carriers.nu_s1, t, cr) + _tone(0.5j * r["s2"], carriers.nu_s2, t, cr))
    h = np.zeros(t.shape + (4, 4), dtype=complex)
    h[..., 0, 2] = pump
    h[..., 0, 3] = -pump
    h[..., 1, 2] = stokes
    h[..., 1, 3] = stokes
    for row, col in ((0, 2), (0, 3), (1, 2), (1, 3)):
        h[..., col, row] = np.conj(h[..., row, col])
    for k, energy in enumerate(carriers.energies):
        h[..., k, k] = energy
    return h


def lab_oracle_model(params: FourLevelParams, carriers: LabCarriers) -> HamiltonianModel:
    return HamiltonianModel(
        name="lab_oracle",
        dim=4,
        generator=lambda times: lab_frame_h(times, params, carriers),
        frame="lab-oracle",
        labels=FOUR_LEVEL_LABELS,
        frame_energies=carriers.frame_energies(params.d1, params.d2),
    )
