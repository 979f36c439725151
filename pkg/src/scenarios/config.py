"""Scenario files: validated pydantic models plus the builders that turn them into runs.

Every physical quantity in a scenario file carries its unit in the key
(``*_MHz_angular`` for angular frequencies in rad/µs, ``*_us`` for times);
unknown keys are rejected.
"""

import hashlib
import json
import logging
import math
import re
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as PydanticValidationError

from src.config import Tolerances, default_tolerances, get_config
from src.model.four_level import (
    FourLevelParams,
    LabCarriers,
    RabiOverride,
    four_level_model,
    lab_oracle_model,
)
from src.model.hamiltonian import HamiltonianModel
from src.model.nine_level import (
    DipoleEntry,
    FineStructure,
    NineLevelParams,
    default_dipoles,
    nine_level_model,
)
from src.propagation.grid import TimeGrid
from src.pulses.schedule import PulseSchedule
from src.utils.errors import ConfigurationError, NVHoloError, ValidationError

logger = logging.getLogger(__name__)

ModelKind = Literal["four_level", "nine_level", "lab_oracle"]
SweepAxis = Literal["alpha", "omega0", "steps"]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)


class GridConfig(_Section):
    t0: float | None = Field(None, alias="t0_us")
    tf: float | None = Field(None, alias="tf_us")
    steps: int | None = Field(None, ge=0)


class DetuningConfig(_Section):
    delta1: float | None = Field(None, alias="delta1_MHz_angular")
    delta2: float | None = Field(None, alias="delta2_MHz_angular")


class LabOracleConfig(_Section):
    carrier: float = Field(1000.0, gt=0, alias="carrier_MHz_angular")
    counter_rotating: bool = True


class XYTones(_Section):
    x_rabi: float = Field(0.0, alias="x_rabi_MHz_angular")
    y_rabi: float = Field(0.0, alias="y_rabi_MHz_angular")
    offset: float = Field(0.0, alias="offset_MHz_angular")


class OutputConfig(_Section):
    trajectory_csv: str | None = None
    report_json: str | None = None
    summary_json: str | None = None
    sweep_csv: str | None = None


class SweepConfig(_Section):
    axis: SweepAxis
    values: tuple[float, ...] | None = None
    start: float | None = None
    stop: float | None = None
    count: int | None = Field(None, ge=0)
    spacing: Literal["linear", "log"] = "linear"

    def points(self) -> list[float]:
        """Sweep values in run order."""
        if self.values is not None:
            points = list(self.values)
        elif None not in (self.start, self.stop, self.count):
            assert self.start is not None and self.stop is not None and self.count is not None
            if self.spacing == "log":
                points = list(np.geomspace(self.start, self.stop, self.count))
            else:
                points = list(np.linspace(self.start, self.stop, self.count))
        else:
            points = []
        if not points:
            raise ConfigurationError("sweep: empty sweep (give 'values' or start/stop/count > 0)")
        if self.axis == "steps":
            return [float(int(round(p))) for p in points]
        return [float(p) for p in points]


class CheckConfig(_Section):
    samples: int = Field(200, ge=1)
    seed: int = 0


class AcceptanceConfig(_Section):
    """Physics checks that decide the exit status of a run; ``None`` disables a check."""

    min_fidelity: float | None = 0.999
    target_amplitudes: tuple[float, float] | None = (1 / math.sqrt(2), 1 / math.sqrt(2))
    amplitude_tol: float = 0.01
    max_excited: float | None = 1e-3
    min_transfer: float | None = 0.99
    max_coupling: float | None = 1e-10
    monotone_infidelity: bool = False
    monotone_tol: float = 1e-6


class ScenarioConfig(_Section):
    """One runnable scenario."""

    scenario: str
    model: ModelKind = "four_level"
    pulse: PulseSchedule = PulseSchedule()
    detunings: DetuningConfig = DetuningConfig()
    rabi_overrides: dict[Literal["p1", "p2", "s1", "s2"], RabiOverride] = Field(default_factory=dict)
    fine_structure: FineStructure | None = None
    fine_structure_scale: float = Field(1.0, gt=0)
    dipoles: tuple[DipoleEntry, ...] | None = None
    xy_tones: XYTones = XYTones()
    lab: LabOracleConfig = LabOracleConfig()
    grid: GridConfig = GridConfig()
    initial_state: str = "1"
    target_gamma: float | None = Field(None, alias="target_gamma_rad")
    outputs: OutputConfig = OutputConfig()
    tolerances: dict[str, float] = Field(default_factory=dict)
    sweep: SweepConfig | None = None
    check: CheckConfig = CheckConfig()
    checks: AcceptanceConfig = AcceptanceConfig()

    @model_validator(mode="after")
    def _check_tolerance_keys(self) -> "ScenarioConfig":
        known = set(Tolerances.__dataclass_fields__)
        unknown = sorted(set(self.tolerances) - known)
        if unknown:
            raise ValueError(f"unknown tolerance keys: {', '.join(unknown)}")
        return self

    @model_validator(mode="after")
    def _check_runnable(self) -> "ScenarioConfig":
        try:
            self.time_grid()
            if self.sweep is not None:
                for index, value in enumerate(self.sweep.points()):
                    self.sweep_point(index, value)
        except ConfigurationError as e:
            raise ValueError(str(e)) from e
        return self

    # ── Builders ────────────────────────────────────────────────────────

    def resolved_tolerances(self) -> Tolerances:
        return default_tolerances().merged(self.tolerances)

    def time_grid(self) -> TimeGrid:
        window = self.pulse.window()
        t0 = window[0] if self.grid.t0 is None else self.grid.t0
        tf = window[1] if self.grid.tf is None else self.grid.tf
        steps = get_config().DEFAULT_STEPS if self.grid.steps is None else self.grid.steps
        try:
            return TimeGrid(t0, tf, steps)
        except ValidationError as e:
            raise ConfigurationError(f"grid (t0_us, tf_us, steps): {e}") from e

    def sweep_point(self, index: int, value: float) -> "ScenarioConfig":
        """Single-point scenario for one sweep value; the sweep block is dropped."""
        assert self.sweep is not None
        where = f"sweep.values[{index}]" if self.sweep.values is not None else f"sweep point {index}"
        point = self.model_copy(update={"sweep": None})
        try:
            if self.sweep.axis == "steps":
                point = point.with_overrides(steps=int(value))
            else:
                pulse = self.pulse.with_updates(**{self.sweep.axis: value})
                point = point.model_copy(update={"pulse": pulse})
            point.time_grid()
        except PydanticValidationError as e:
            detail = "; ".join(err["msg"] for err in e.errors())
            raise ConfigurationError(f"{where}: {self.sweep.axis} = {value:g}: {detail}") from e
        except ConfigurationError as e:
            raise ConfigurationError(f"{where}: {self.sweep.axis} = {value:g}: {e}") from e
        return point

    def four_level_params(self) -> FourLevelParams:
        return FourLevelParams(
            schedule=self.pulse,
            delta1=self.detunings.delta1,
            delta2=self.detunings.delta2,
            overrides=dict(self.rabi_overrides),
        )

    def nine_level_params(self) -> NineLevelParams:
        if self.fine_structure is None:
            raise ConfigurationError(
                "fine_structure: the nine-level model needs the excited-state energies "
                "(ground_splitting_MHz_angular, A1_MHz_angular, ..., Epy_MHz_angular)"
            )
        fine = self.fine_structure
        if self.fine_structure_scale != 1.0:
            fine = fine.scaled(self.fine_structure_scale)
        return NineLevelParams(
            fine_structure=fine,
            schedule=self.pulse,
            delta1=self.detunings.delta1,
            delta2=self.detunings.delta2,
            overrides=dict(self.rabi_overrides),
            dipoles=self.dipoles if self.dipoles is not None else default_dipoles(),
            x_rabi=self.xy_tones.x_rabi,
            y_rabi=self.xy_tones.y_rabi,
            xy_offset=self.xy_tones.offset,
        )

    def lab_carriers(self) -> LabCarriers:
        params = self.four_level_params()
        return LabCarriers.surrogate(
            self.lab.carrier, params.d1, params.d2, self.lab.counter_rotating
        )

    def build_model(self) -> HamiltonianModel:
        if self.model == "nine_level":
            return nine_level_model(self.nine_level_params())
        if self.model == "lab_oracle":
            return lab_oracle_model(self.four_level_params(), self.lab_carriers())
        return four_level_model(self.four_level_params())

    def initial_vector(self, model: HamiltonianModel) -> np.ndarray:
        label = self.initial_state.strip().removeprefix("|").removesuffix(">").removesuffix("⟩")
        if label not in model.labels:
            raise ConfigurationError(
                f"initial_state: {self.initial_state!r} is not one of {', '.join(model.labels)}"
            )
        state = np.zeros(model.dim, dtype=complex)
        state[model.labels.index(label)] = 1.0
        return state

    def with_overrides(self, steps: int | None = None, seed: int | None = None) -> "ScenarioConfig":
        """Apply command-line overrides."""
        updated = self
        if steps is not None:
            updated = updated.model_copy(
                update={"grid": updated.grid.model_copy(update={"steps": steps})}
            )
        if seed is not None:
            updated = updated.model_copy(
                update={"check": updated.check.model_copy(update={"seed": seed})}
            )
        return updated

    def run_id(self) -> str:
        """Deterministic identifier: a hash of the canonical scenario JSON."""
        canonical = json.dumps(self.model_dump(mode="json", by_alias=True), sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()[:12]


# ── Loading with line-level diagnostics ─────────────────────────────────


def _line_of(text: str, loc: tuple) -> int | None:
    """Best-effort line number of the innermost string key in ``loc``."""
    for key in reversed(loc):
        if isinstance(key, str):
            match = re.search(rf'"{re.escape(key)}"\s*:', text)
            if match:
                return text.count("\n", 0, match.start()) + 1
    return None


def format_validation_error(exc: PydanticValidationError, text: str, source: str) -> str:
    lines = []
    for err in exc.errors():
        loc = tuple(err.get("loc", ()))
        dotted = ".".join(str(part) for part in loc) or "<root>"
        line = _line_of(text, loc)
        where = f"{source}:{line}" if line is not None else source
        lines.append(f"{where}: {dotted}: {err.get('msg', 'invalid value')}")
    return "\n".join(lines)


def parse_scenario(text: str, source: str = "<config>") -> ScenarioConfig:
    """Validate a scenario document; keys must be the unit-suffixed aliases."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from e
    try:
        return ScenarioConfig.model_validate(data, by_alias=True, by_name=False)
    except PydanticValidationError as e:
        raise ConfigurationError(format_validation_error(e, text, source)) from e
    except NVHoloError as e:
        raise ConfigurationError(f"{source}: {e}") from e


def load_scenario(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot read scenario file {path}: {e}") from e
    scenario = parse_scenario(text, str(path))
    logger.info("Loaded scenario %r from %s", scenario.scenario, path)
    return scenario
