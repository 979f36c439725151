"""Gate reports: one run scored three independent ways."""

import logging
import math
import time
from importlib.metadata import PackageNotFoundError, version

import numpy as np
from pydantic import BaseModel, Field

from src.analysis.gate import (
    eigenbasis_offdiagonal,
    extract_qubit_gate,
    operator_fidelity,
    propagation_phase_gamma,
)
from src.linalg.core import polar_unitary, unitarity_defect
from src.model.states import ideal_gate, realized_axis_angles
from src.propagation.adiabatic import dark_subspace_propagator
from src.propagation.propagator import propagate_unitary
from src.pulses.bloch import default_path_grid, geometric_phase_estimate, path_angles
from src.scenarios.config import ScenarioConfig
from src.utils.errors import NVHoloError, PathClosureError

logger = logging.getLogger(__name__)


def package_version() -> str:
    try:
        return version("nvholo-sim")
    except PackageNotFoundError:
        return "1.0.0"


class ComplexMatrixPayload(BaseModel):
    real: list[list[float]]
    imag: list[list[float]]

    @classmethod
    def from_array(cls, matrix: np.ndarray) -> "ComplexMatrixPayload":
        matrix = np.asarray(matrix, dtype=complex)
        return cls(real=matrix.real.tolist(), imag=matrix.imag.tolist())

    def to_array(self) -> np.ndarray:
        return np.array(self.real) + 1j * np.array(self.imag)


class GammaEstimates(BaseModel):
    solid_angle: float | None = None
    solid_angle_error: float | None = None
    dark_subspace: float | None = None
    propagation_phase: float


class Fidelities(BaseModel):
    raw: float = Field(..., ge=0, le=1)
    projected: float = Field(..., ge=0, le=1)
    dark_subspace: float | None = Field(None, ge=0, le=1)
    dark_vs_propagation: float | None = Field(None, ge=0, le=1)


class AxisAngles(BaseModel):
    chi_rad: float
    phi_rad: float


class GateReport(BaseModel):
    scenario: str
    model: str
    run_id: str
    version: str
    gate_raw: ComplexMatrixPayload
    gate_projected: ComplexMatrixPayload
    gate_ideal: ComplexMatrixPayload
    gate_dark_subspace: ComplexMatrixPayload | None = None
    leakage: float = Field(..., ge=0)
    raw_unitarity_defect: float = Field(..., ge=0)
    target_gamma_rad: float
    realized_axis: AxisAngles
    gamma: GammaEstimates
    fidelity: Fidelities
    eigenbasis_offdiagonal: float
    eigenbasis_flag: bool
    parameters: dict
    grid: dict
    elapsed_s: float | None = Field(None, exclude=True)


def _solid_angle(scenario: ScenarioConfig) -> tuple[float | None, float | None]:
    schedule = scenario.pulse
    if schedule.omega0 <= 0:
        return None, None
    tol = scenario.resolved_tolerances()
    path = path_angles(schedule, default_path_grid(schedule))
    try:
        return geometric_phase_estimate(path, tol.closure)
    except PathClosureError as e:
        logger.warning("Solid-angle estimate skipped: %s", e)
        return None, None


def build_gate_report(scenario: ScenarioConfig, propagator: np.ndarray | None = None) -> GateReport:
    """Propagate the full model, run the adiabatic oracle and the path integral, and score them.

    ``propagator`` is the full-model ``U(tf, t0)`` on the scenario grid, before the
    rotating-frame map, when the caller has already computed it.
    """
    run_id = scenario.run_id()
    start = time.time()
    logger.info("[%s] Building gate report for %r (%s)", run_id, scenario.scenario, scenario.model)
    try:
        report = _build(scenario, run_id, propagator)
    except NVHoloError as e:
        logger.error("[%s] Gate report failed: %s", run_id, e)
        raise type(e)(f"[{scenario.scenario}] {e}") from e
    elapsed = time.time() - start
    logger.info(
        "[%s] Gate report complete in %.2fs: F = %.6f, leakage = %.2e",
        run_id,
        elapsed,
        report.fidelity.raw,
        report.leakage,
    )
    return report.model_copy(update={"elapsed_s": elapsed})


def _build(scenario: ScenarioConfig, run_id: str, propagator: np.ndarray | None) -> GateReport:
    tol = scenario.resolved_tolerances()
    schedule = scenario.pulse
    grid = scenario.time_grid()
    model = scenario.build_model()
    chi, phi = realized_axis_angles(schedule.chi, schedule.phi)

    u_full = propagate_unitary(model, grid, tol) if propagator is None else propagator
    u_full = model.rotating_propagator(u_full, grid.t0, grid.tf)
    block, leakage = extract_qubit_gate(u_full, model.qubit_indices, tol.extract_unitary)
    projected = polar_unitary(block)
    gamma_propagation = propagation_phase_gamma(projected, chi, phi, tol.extract_unitary)
    offdiag = eigenbasis_offdiagonal(projected, chi, phi)
    if offdiag > tol.eigenbasis_offdiag:
        logger.warning(
            "[%s] |D>/|-D> are not eigenvectors of the propagated gate (off-diagonal %.3f)",
            run_id,
            offdiag,
        )

    gamma_solid, gamma_error = _solid_angle(scenario)
    if scenario.target_gamma is not None:
        target = scenario.target_gamma
    elif gamma_solid is not None:
        target = gamma_solid
    else:
        target = gamma_propagation
    ideal = ideal_gate(chi, phi, target)

    dark_gate = None
    gamma_dark = dark_fidelity = agreement = None
    if schedule.omega0 > 0:
        dark_gate = dark_subspace_propagator(schedule, grid, tol)
        dark_projected = polar_unitary(dark_gate)
        gamma_dark = propagation_phase_gamma(dark_projected, chi, phi, tol.extract_unitary)
        dark_fidelity = operator_fidelity(ideal, dark_gate)
        agreement = operator_fidelity(dark_gate, projected)

    return GateReport(
        scenario=scenario.scenario,
        model=scenario.model,
        run_id=run_id,
        version=package_version(),
        gate_raw=ComplexMatrixPayload.from_array(block),
        gate_projected=ComplexMatrixPayload.from_array(projected),
        gate_ideal=ComplexMatrixPayload.from_array(ideal),
        gate_dark_subspace=None if dark_gate is None else ComplexMatrixPayload.from_array(dark_gate),
        leakage=leakage,
        raw_unitarity_defect=unitarity_defect(block),
        target_gamma_rad=target,
        realized_axis=AxisAngles(chi_rad=chi, phi_rad=phi),
        gamma=GammaEstimates(
            solid_angle=gamma_solid,
            solid_angle_error=gamma_error,
            dark_subspace=gamma_dark,
            propagation_phase=gamma_propagation,
        ),
        fidelity=Fidelities(
            raw=operator_fidelity(ideal, block),
            projected=operator_fidelity(ideal, projected),
            dark_subspace=dark_fidelity,
            dark_vs_propagation=agreement,
        ),
        eigenbasis_offdiagonal=offdiag,
        eigenbasis_flag=offdiag > tol.eigenbasis_offdiag,
        parameters=scenario.model_dump(
            mode="json", by_alias=True, include={"model", "pulse", "detunings", "rabi_overrides", "fine_structure", "fine_structure_scale", "lab"}
        ),
        grid=grid.as_dict(),
    )


def gamma_agreement(report: GateReport) -> dict[str, float | None]:
    """Pairwise gaps between the gamma estimates (rad)."""
    g = report.gamma

    def gap(a: float | None, b: float | None) -> float | None:
        return None if a is None or b is None else abs(math.remainder(a - b, 2 * math.pi))

    return {
        "solid_angle_vs_dark": gap(g.solid_angle, g.dark_subspace),
        "solid_angle_vs_propagation": gap(g.solid_angle, g.propagation_phase),
        "dark_vs_propagation": gap(g.dark_subspace, g.propagation_phase),
    }
