"""Nine-level model: ground triplet plus the six excited fine-structure states.

Basis ordering::

    0 ms-1 (|1>)   1 ms+1 (|2>)   2 ms0
    3 A1 (|3>)     4 A2 (|4>)     5 Ex   6 Ey   7 E'x   8 E'y

The Hamiltonian is written in a frame rotating with the first pump tone for
every excited level except A2, which rotates with the second tone. Each tone
drives every transition its channel allows, so off-resonant partners keep an
explicit beat phase ``exp(i (nu + f_g - f_e) t)``; only counter-rotating terms
are dropped.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.model.four_level import RabiOverride
from src.model.hamiltonian import HamiltonianModel
from src.pulses.schedule import PulseSchedule
from src.utils.errors import SelectionRuleError

logger = logging.getLogger(__name__)

NINE_LEVEL_LABELS = ("ms-1", "ms+1", "ms0", "A1", "A2", "Ex", "Ey", "E'x", "E'y")
INDEX = {label: k for k, label in enumerate(NINE_LEVEL_LABELS)}
GROUND = ("ms-1", "ms+1", "ms0")
EXCITED = ("A1", "A2", "Ex", "Ey", "E'x", "E'y")
LEAKAGE_STATES = ("ms0", "Ex", "Ey", "E'x", "E'y")

Channel = Literal["pump", "stokes", "x", "y"]

# Polarization is descriptive only; the coupling topology is what the model enforces.
POLARIZATION = {"pump": "sigma-", "stokes": "sigma+", "x": "x", "y": "y"}

ALLOWED_COUPLINGS: frozenset[tuple[str, str, str]] = frozenset(
    {
        ("ms-1", "A1", "pump"),
        ("ms-1", "A2", "pump"),
        ("ms+1", "Ex", "pump"),
        ("ms+1", "Ey", "pump"),
        ("ms+1", "A1", "stokes"),
        ("ms+1", "A2", "stokes"),
        ("ms-1", "Ex", "stokes"),
        ("ms-1", "Ey", "stokes"),
        ("ms0", "E'y", "x"),
        ("ms0", "E'x", "y"),
    }
)

# Relative signs reproduce the four-level reduction on {ms-1, ms+1, A1, A2}.
_DEFAULT_SIGNS = {
    ("ms-1", "A1", "pump"): 1.0,
    ("ms-1", "A2", "pump"): -1.0,
    ("ms+1", "A1", "stokes"): -1.0,
    ("ms+1", "A2", "stokes"): -1.0,
}

TONE_WEIGHTS = {"p1": 1.0, "p2": -1.0, "s1": 1.0, "s2": 1.0}


class FineStructure(BaseModel):
    """Level energies in rad/µs. Excited energies share one optical zero; only differences matter."""

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    ground_splitting: float = Field(..., gt=0, alias="ground_splitting_MHz_angular")
    a1: float = Field(..., alias="A1_MHz_angular")
    a2: float = Field(..., alias="A2_MHz_angular")
    ex: float = Field(..., alias="Ex_MHz_angular")
    ey: float = Field(..., alias="Ey_MHz_angular")
    epx: float = Field(..., alias="Epx_MHz_angular")
    epy: float = Field(..., alias="Epy_MHz_angular")
    provenance: str = ""

    def excited(self) -> dict[str, float]:
        return {"A1": self.a1, "A2": self.a2, "Ex": self.ex, "Ey": self.ey, "E'x": self.epx, "E'y": self.epy}

    def scaled(self, factor: float) -> "FineStructure":
        """Scale every excited-state splitting about ``Ex``; the ground splitting is unchanged."""
        def about(value: float) -> float:
            return self.ex + factor * (value - self.ex)

        return self.model_copy(
            update={
                "a1": about(self.a1),
                "a2": about(self.a2),
                "ey": about(self.ey),
                "epx": about(self.epx),
                "epy": about(self.epy),
                "provenance": f"{self.provenance} (splittings x{factor:g})".strip(),
            }
        )


class DipoleEntry(BaseModel):
    """Relative strength of one polarization-allowed transition."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    ground: Literal["ms-1", "ms+1", "ms0"]
    excited: Literal["A1", "A2", "Ex", "Ey", "E'x", "E'y"]
    channel: Channel
    strength: tuple[float, float] = Field(..., description="(real, imag) relative coupling")

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.ground, self.excited, self.channel)

    @property
    def value(self) -> complex:
        return complex(*self.strength)


def default_dipoles() -> tuple[DipoleEntry, ...]:
    """Equal magnitudes ``1/2`` with the four-level relative signs; phase ``i``."""
    entries = []
    for ground, excited, channel in sorted(ALLOWED_COUPLINGS):
        sign = _DEFAULT_SIGNS.get((ground, excited, channel), 1.0)
        entries.append(
            DipoleEntry(ground=ground, excited=excited, channel=channel, strength=(0.0, 0.5 * sign))
        )
    return tuple(entries)


def validate_dipoles(dipoles: tuple[DipoleEntry, ...]) -> None:
    """Require the nonzero entries to cover the allowed pattern exactly."""
    keys = [d.key for d in dipoles if d.value != 0]
    duplicates = sorted({k for k in keys if keys.count(k) > 1})
    extra = sorted(set(keys) - ALLOWED_COUPLINGS)
    missing = sorted(ALLOWED_COUPLINGS - set(keys))
    problems = []
    if duplicates:
        problems.append("duplicated " + ", ".join("/".join(k) for k in duplicates))
    if extra:
        problems.append("forbidden " + ", ".join("/".join(k) for k in extra))
    if missing:
        problems.append("missing " + ", ".join("/".join(k) for k in missing))
    if problems:
        raise SelectionRuleError("Dipole table breaks the selection rules: " + "; ".join(problems))


@dataclass(frozen=True)
class NineLevelParams:
    """Fine structure, dipole table and laser fields for the nine-level model."""

    fine_structure: FineStructure
    schedule: PulseSchedule
    delta1: float | None = None
    delta2: float | None = None
    overrides: dict[str, RabiOverride] = field(default_factory=dict)
    dipoles: tuple[DipoleEntry, ...] = field(default_factory=default_dipoles)
    x_rabi: float = 0.0
    y_rabi: float = 0.0
    xy_offset: float = 0.0

    def __post_init__(self) -> None:
        validate_dipoles(self.dipoles)

    @property
    def d1(self) -> float:
        return self.schedule.omega0 if self.delta1 is None else self.delta1

    @property
    def d2(self) -> float:
        return self.schedule.omega0 if self.delta2 is None else self.delta2

    # ── Energies and carriers ───────────────────────────────────────────

    def energies(self) -> np.ndarray:
        fs = self.fine_structure
        values = {"ms-1": fs.ground_splitting, "ms+1": fs.ground_splitting, "ms0": 0.0}
        values.update(fs.excited())
        return np.array([values[label] for label in NINE_LEVEL_LABELS])

    def carriers(self) -> dict[str, float]:
        """Tone frequencies: pump and Stokes share ``nu_1`` (A1 leg) and ``nu_2`` (A2 leg)."""
        fs = self.fine_structure
        nu1 = fs.a1 - fs.ground_splitting - self.d1
        nu2 = fs.a2 - fs.ground_splitting + self.d2
        nu_xy = nu1 + self.xy_offset
        return {"p1": nu1, "p2": nu2, "s1": nu1, "s2": nu2, "x": nu_xy, "y": nu_xy}

    def frame(self) -> np.ndarray:
        """Per-level frame frequencies ``f``; diagonal entries are ``E - f``."""
        fs = self.fine_structure
        nu = self.carriers()
        f = np.full(len(NINE_LEVEL_LABELS), fs.ground_splitting + nu["p1"])
        f[INDEX["ms-1"]] = fs.ground_splitting
        f[INDEX["ms+1"]] = fs.ground_splitting
        f[INDEX["ms0"]] = 0.0
        f[INDEX["A2"]] = fs.ground_splitting + nu["p2"]
        return f

    def tone_amplitudes(self, t: np.ndarray) -> dict[str, np.ndarray]:
        omega, u_p, u_s = self.schedule.drive_components(t)
        omega_p, omega_s = omega * u_p, omega * u_s

        def factor(name: str) -> complex:
            override = self.overrides.get(name)
            return 1.0 + 0j if override is None else override.factor

        ones = np.ones_like(omega_p)
        return {
            "p1": factor("p1") * omega_p,
            "p2": factor("p2") * omega_p,
            "s1": factor("s1") * omega_s,
            "s2": factor("s2") * omega_s,
            "x": self.x_rabi * ones,
            "y": self.y_rabi * ones,
        }


_CHANNEL_TONES = {"pump": ("p1", "p2"), "stokes": ("s1", "s2"), "x": ("x",), "y": ("y",)}


def nine_level_h(t, params: NineLevelParams) -> np.ndarray:
    """Rotating-frame nine-level Hamiltonian; scalar ``t`` gives ``(9, 9)``."""
    t = np.asarray(t, dtype=float)
    nu = params.carriers()
    f = params.frame()
    amplitudes = params.tone_amplitudes(t)
    h = np.zeros(t.shape + (9, 9), dtype=complex)
    diag = params.energies() - f
    for k in range(9):
        h[..., k, k] = diag[k]
    for dipole in params.dipoles:
        if dipole.value == 0:
            continue
        g, e = INDEX[dipole.ground], INDEX[dipole.excited]
        coupling = np.zeros(t.shape, dtype=complex)
        for tone in _CHANNEL_TONES[dipole.channel]:
            weight = TONE_WEIGHTS.get(tone, 1.0)
            beat = nu[tone] + f[g] - f[e]
            coupling = coupling + weight * amplitudes[tone] * np.exp(1j * beat * t)
        h[..., g, e] += dipole.value * coupling
        h[..., e, g] += np.conj(dipole.value * coupling)
    return h


def beat_frequencies(params: NineLevelParams) -> dict[tuple[str, str, str], float]:
    """Residual beat frequency of every (ground, excited, tone) term; zero means resonant."""
    nu = params.carriers()
    f = params.frame()
    beats = {}
    for dipole in params.dipoles:
        for tone in _CHANNEL_TONES[dipole.channel]:
            g, e = INDEX[dipole.ground], INDEX[dipole.excited]
            beats[(dipole.ground, dipole.excited, tone)] = float(nu[tone] + f[g] - f[e])
    return beats


def nine_level_model(params: NineLevelParams) -> HamiltonianModel:
    logger.debug("Nine-level carriers: %s", params.carriers())
    return HamiltonianModel(
        name="nine_level",
        dim=9,
        generator=lambda times: nine_level_h(times, params),
        frame="rotating-with-beats",
        labels=NINE_LEVEL_LABELS,
        qubit_indices=(INDEX["ms-1"], INDEX["ms+1"]),
    )


def superposition_norms(states: np.ndarray) -> dict[str, np.ndarray]:
    """Norms of ``(Ex +- E'x)/sqrt(2)`` and ``(Ey +- E'y)/sqrt(2)`` projections."""
    r2 = math.sqrt(2.0)
    ex, ey, epx, epy = (states[..., INDEX[k]] for k in ("Ex", "Ey", "E'x", "E'y"))
    return {
        "Ex+E'x": np.abs(ex + epx) / r2,
        "Ex-E'x": np.abs(ex - epx) / r2,
        "Ey+E'y": np.abs(ey + epy) / r2,
        "Ey-E'y": np.abs(ey - epy) / r2,
    }
