"""Scenario runners behind the CLI verbs.

Each runner takes a validated :class:`ScenarioConfig` and an output
directory, writes its artifacts, and returns a :class:`RunResult` whose
``passed`` flag reflects the scenario's acceptance checks.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from src.analysis.report import GateReport, build_gate_report, gamma_agreement
from src.config import get_config
from src.model.four_level import four_level_h
from src.model.hamiltonian import HamiltonianModel
from src.model.nine_level import INDEX, LEAKAGE_STATES, POLARIZATION, superposition_norms
from src.model.states import dark_states
from src.propagation.adiabatic import nonadiabatic_coupling
from src.propagation.propagator import Trajectory, propagate_state, propagate_state_and_unitary
from src.scenarios.config import ScenarioConfig
from src.scenarios.writers import frame_from_columns, write_csv, write_json
from src.utils.errors import ConfigurationError, PhysicsCheckError
from src.utils.validators import validate_dark_regime

logger = logging.getLogger(__name__)

NORM_DRIFT_LIMIT = 1e-8
DOMINANT_STATES = ("ms-1", "ms+1", "A1", "A2")
COUPLING_SAMPLES = 41


@dataclass
class RunResult:
    name: str
    passed: bool
    summary: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    files: list[Path] = field(default_factory=list)
    report: GateReport | None = None

    def raise_for_failure(self) -> None:
        if not self.passed:
            raise PhysicsCheckError(f"{self.name}: " + "; ".join(self.failures))


def _column_name(label: str) -> str:
    return "abs_" + label.replace("ms-", "ms_m").replace("ms+", "ms_p").replace("E'", "Ep")


def _output(out_dir: Path, configured: str | None, fallback: str) -> Path:
    return out_dir / (configured or fallback)


def _rotating_states(model: HamiltonianModel, trajectory: Trajectory) -> np.ndarray:
    if model.frame_energies is None:
        return trajectory.states
    phases = np.exp(1j * np.outer(trajectory.times, model.frame_energies))
    return trajectory.states * phases


def _run_trajectory(scenario: ScenarioConfig) -> tuple[Trajectory, np.ndarray]:
    model = scenario.build_model()
    grid = scenario.time_grid()
    psi0 = scenario.initial_vector(model)
    trajectory = propagate_state(model, psi0, grid, scenario.resolved_tolerances())
    return trajectory, _rotating_states(model, trajectory)



def _check_norm(trajectory: Trajectory, failures: list[str]) -> float:
    drift = trajectory.max_norm_drift()
    if drift > NORM_DRIFT_LIMIT:
        failures.append(f"norm drift {drift:.2e} exceeds {NORM_DRIFT_LIMIT:.0e}")
    return drift


# ── fig3 ────────────────────────────────────────────────────────────────


def run_fig3(scenario: ScenarioConfig, out_dir: Path) -> RunResult:
    """Four-level gate demonstration: amplitude norms plus the gate report."""
    if scenario.model == "nine_level":
        raise ConfigurationError("model: fig3 runs the four-level or lab_oracle model")
    run_id = scenario.run_id()
    start = time.time()
    logger.info("[%s] Starting fig3 run %r", run_id, scenario.scenario)

    model = scenario.build_model()
    grid = scenario.time_grid()
    trajectory, u_full = propagate_state_and_unitary(
        model, scenario.initial_vector(model), grid, scenario.resolved_tolerances()
    )
    norms = np.abs(_rotating_states(model, trajectory))
    failures: list[str] = []
    drift = _check_norm(trajectory, failures)
    final = norms[-1]
    checks = scenario.checks
    if checks.target_amplitudes is not None:
        for k, target in enumerate(checks.target_amplitudes):
            if abs(final[k] - target) > checks.amplitude_tol:
                failures.append(f"|c{k + 1}| = {final[k]:.4f}, expected {target:.4f} +- {checks.amplitude_tol}")
    if checks.max_excited is not None and np.max(final[2:]) > checks.max_excited:
        failures.append(f"final excited norm {np.max(final[2:]):.2e} exceeds {checks.max_excited:.0e}")

    report = build_gate_report(scenario, propagator=u_full)
    if checks.min_fidelity is not None and report.fidelity.raw < checks.min_fidelity:
        failures.append(f"operator fidelity {report.fidelity.raw:.6f} below {checks.min_fidelity}")

    columns = {f"abs_c{k + 1}": norms[:, k] for k in range(norms.shape[1])}
    files = [
        write_csv(
            _output(out_dir, scenario.outputs.trajectory_csv, f"{scenario.scenario}_trajectory.csv"),
            frame_from_columns(trajectory.times, columns),
        ),
        write_json(
            _output(out_dir, scenario.outputs.report_json, f"{scenario.scenario}_gate_report.json"),
            report,
        ),
    ]
    summary = {
        "final_amplitudes": final.tolist(),
        "peak_excited": float(np.max(norms[:, 2:])),
        "norm_drift": drift,
        "fidelity": report.fidelity.raw,
    }
    if scenario.outputs.summary_json:
        files.append(write_json(out_dir / scenario.outputs.summary_json, summary))
    logger.info("[%s] fig3 finished in %.2fs (%s)", run_id, time.time() - start, "pass" if not failures else "FAIL")
    return RunResult("fig3", not failures, summary, failures, files, report)


# ── fig2 ────────────────────────────────────────────────────────────────


def fig2_summary(states: np.ndarray) -> dict:
    """Peak norms per level, the dominance property and the leakage ceiling."""
    norms = np.abs(states)
    peaks = {label: float(np.max(norms[:, INDEX[label]])) for label in INDEX}
    others = [label for label in INDEX if label not in DOMINANT_STATES]
    dominance = min(peaks[s] for s in DOMINANT_STATES) > max(peaks[s] for s in others)
    leak = np.sum(norms[:, [INDEX[s] for s in LEAKAGE_STATES]] ** 2, axis=1)
    return {
        "peak_norms": peaks,
        "dominance": bool(dominance),
        "leakage_ceiling": float(np.max(leak)),
        "final_populations": {label: float(norms[-1, INDEX[label]] ** 2) for label in INDEX},
        "polarization": dict(POLARIZATION),
    }


def run_fig2(scenario: ScenarioConfig, out_dir: Path) -> RunResult:
    """Nine-level selection-rule validation run."""
    if scenario.model != "nine_level":
        raise ConfigurationError("model: fig2 needs model 'nine_level'")
    run_id = scenario.run_id()
    logger.info("[%s] Starting fig2 run %r", run_id, scenario.scenario)
    trajectory, states = _run_trajectory(scenario)
    failures: list[str] = []
    drift = _check_norm(trajectory, failures)
    summary = fig2_summary(states)
    summary["norm_drift"] = drift
    if not summary["dominance"]:
        failures.append("dominance property fails: an off-path level outgrows the driven levels")

    columns = {_column_name(label): np.abs(states[:, INDEX[label]]) for label in INDEX}
    for name, values in superposition_norms(states).items():
        columns[_column_name(name.replace("+", "_plus_").replace("-", "_minus_"))] = values
    files = [
        write_csv(
            _output(out_dir, scenario.outputs.trajectory_csv, f"{scenario.scenario}_trajectory.csv"),
            frame_from_columns(trajectory.times, columns),
        ),
        write_json(_output(out_dir, scenario.outputs.summary_json, f"{scenario.scenario}_summary.json"), summary),
    ]
    logger.info("[%s] fig2 leakage ceiling %.3e, dominance %s", run_id, summary["leakage_ceiling"], summary["dominance"])
    return RunResult("fig2", not failures, summary, failures, files)


# ── stirap ──────────────────────────────────────────────────────────────


def max_dark_coupling(scenario: ScenarioConfig, samples: int = COUPLING_SAMPLES) -> float:
    """Largest ``|<D2|d/dt|D1>|`` over evenly spaced times where the drive is on."""
    grid = scenario.time_grid()
    times = np.linspace(grid.t0, grid.tf, samples)
    omega, _, _ = scenario.pulse.drive_components(times)
    active = times[np.asarray(omega) > 0]
    if len(active) == 0:
        return 0.0
    return max(abs(nonadiabatic_coupling(scenario.pulse, float(t), grid.dt)) for t in active)


def run_stirap(scenario: ScenarioConfig, out_dir: Path) -> RunResult:
    """Resonant counterintuitive transfer ``|1> -> |2>``."""
    run_id = scenario.run_id()
    logger.info("[%s] Starting stirap run %r", run_id, scenario.scenario)
    trajectory, states = _run_trajectory(scenario)
    failures: list[str] = []
    drift = _check_norm(trajectory, failures)
    transfer = float(abs(states[-1, 1]) ** 2)
    coupling = max_dark_coupling(scenario)
    checks = scenario.checks
    if checks.min_transfer is not None and transfer < checks.min_transfer:
        failures.append(f"final |2> population {transfer:.4f} below {checks.min_transfer}")
    if checks.max_coupling is not None and coupling > checks.max_coupling:
        failures.append(f"dark-dark coupling {coupling:.2e} exceeds {checks.max_coupling:.0e}")
    summary = {
        "final_population_2": transfer,
        "max_dark_coupling": coupling,
        "peak_excited_population": float(np.max(np.sum(np.abs(states[:, 2:]) ** 2, axis=1))),
        "norm_drift": drift,
    }
    norms = np.abs(states)
    files = [
        write_csv(
            _output(out_dir, scenario.outputs.trajectory_csv, f"{scenario.scenario}_trajectory.csv"),
            frame_from_columns(trajectory.times, {f"abs_c{k + 1}": norms[:, k] for k in range(norms.shape[1])}),
        ),
        write_json(_output(out_dir, scenario.outputs.summary_json, f"{scenario.scenario}_summary.json"), summary),
    ]
    return RunResult("stirap", not failures, summary, failures, files)


# ── gate-report ─────────────────────────────────────────────────────────


def run_gate_report(scenario: ScenarioConfig, out_dir: Path) -> RunResult:
    report = build_gate_report(scenario)
    failures = []
    min_fidelity = scenario.checks.min_fidelity
    if min_fidelity is not None and report.fidelity.raw < min_fidelity:
        failures.append(f"operator fidelity {report.fidelity.raw:.6f} below {min_fidelity}")
    path = write_json(
        _output(out_dir, scenario.outputs.report_json, f"{scenario.scenario}_gate_report.json"), report
    )
    summary = {"fidelity": report.fidelity.raw, "leakage": report.leakage, **gamma_agreement(report)}
    return RunResult("gate-report", not failures, summary, failures, [path], report)


# ── sweep ───────────────────────────────────────────────────────────────


def sweep_points(scenario: ScenarioConfig) -> list[tuple[float, ScenarioConfig]]:
    """Expand a sweep into single-point scenarios, in sweep order."""
    if scenario.sweep is None:
        raise ConfigurationError("sweep: the sweep verb needs a 'sweep' block")
    return [
        (value, scenario.sweep_point(index, value))
        for index, value in enumerate(scenario.sweep.points())
    ]



def _sweep_point(scenario: ScenarioConfig) -> GateReport:
    return build_gate_report(scenario)


def _adiabaticity_order(axis: str, values: list[float]) -> list[int] | None:
    """Indices ordered from least to most adiabatic, or None when the axis has no such order."""
    if axis == "alpha":
        return sorted(range(len(values)), key=lambda i: -values[i])
    if axis == "omega0":
        return sorted(range(len(values)), key=lambda i: values[i])
    return None


def run_sweep(scenario: ScenarioConfig, out_dir: Path) -> RunResult:
    """One gate report per sweep point; points are independent and may run in parallel."""
    run_id = scenario.run_id()
    points = sweep_points(scenario)
    axis = scenario.sweep.axis if scenario.sweep else "value"
    workers = get_config().SWEEP_WORKERS
    logger.info("[%s] Starting %s sweep over %d points (%d workers)", run_id, axis, len(points), workers)
    configs = [point for _, point in points]
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_sweep_point, configs))
    else:
        reports = [_sweep_point(point) for point in configs]

    values = [value for value, _ in points]
    rows = []
    previous = None
    for value, report in zip(values, reports, strict=True):
        gate = report.gate_raw.to_array()
        drift = math.nan if previous is None else float(np.max(np.abs(gate - previous)))
        previous = gate
        rows.append(
            {
                axis: value,
                "fidelity_raw": report.fidelity.raw,
                "fidelity_projected": report.fidelity.projected,
                "infidelity": 1.0 - report.fidelity.raw,
                "leakage": report.leakage,
                "gamma_solid_angle": report.gamma.solid_angle,
                "gamma_dark_subspace": report.gamma.dark_subspace,
                "gamma_propagation": report.gamma.propagation_phase,
                "fidelity_dark_subspace": report.fidelity.dark_subspace,
                "gate_drift": drift,
            }
        )
    frame = pd.DataFrame(rows)

    failures: list[str] = []
    order = _adiabaticity_order(axis, values)
    if scenario.checks.monotone_infidelity and order is not None:
        infidelity = frame["infidelity"].to_numpy()
        for a, b in zip(order, order[1:], strict=False):
            if infidelity[b] > infidelity[a] + scenario.checks.monotone_tol:
                failures.append(
                    f"infidelity rises from {infidelity[a]:.3e} ({axis}={values[a]:g}) "
                    f"to {infidelity[b]:.3e} ({axis}={values[b]:g})"
                )
    path = write_csv(_output(out_dir, scenario.outputs.sweep_csv, f"{scenario.scenario}_sweep.csv"), frame)
    summary = {"axis": axis, "points": len(rows)}
    return RunResult("sweep", not failures, summary, failures, [path])


# ── check-dark ──────────────────────────────────────────────────────────


def dark_residuals(scenario: ScenarioConfig, samples: int, seed: int) -> dict:
    """Sample random times and measure ``||H|D_i>|| / ||H||`` for both dark states."""
    params = scenario.four_level_params()
    grid = scenario.time_grid()
    rng = np.random.default_rng(seed)
    times = np.sort(rng.uniform(grid.t0, grid.tf, samples))
    h = four_level_h(times, params)
    rabi = params.rabi(times)
    _, u_p, u_s = params.schedule.drive_components(times)
    omega = np.hypot(np.abs(rabi["p1"]), np.abs(rabi["s1"]))
    d1, d2 = dark_states(rabi["p1"], rabi["s1"], params.schedule.omega0, direction=(u_p, u_s))
    h_norm = np.linalg.norm(h, ord=2, axis=(-2, -1))
    safe = np.where(h_norm > 0, h_norm, 1.0)

    def residual(states: np.ndarray) -> np.ndarray:
        applied = np.linalg.norm(np.einsum("nij,nj->ni", h, states), axis=1)
        return np.where(h_norm > 0, applied / safe, 0.0)

    r1 = residual(d1)
    driven = omega > 0
    r2 = residual(d2)[driven]
    return {
        "samples": samples,
        "seed": seed,
        "max_residual_d1": float(np.max(r1)),
        "max_residual_d2": float(np.max(r2)) if r2.size else None,
        "d2_evaluated": int(r2.size),
    }


def run_check_dark(scenario: ScenarioConfig, out_dir: Path) -> RunResult:
    """Verify the two zero eigenvalues of the four-level Hamiltonian at random times."""
    if scenario.model == "nine_level":
        raise ConfigurationError("model: check-dark evaluates the four-level Hamiltonian")
    tol = scenario.resolved_tolerances()
    params = scenario.four_level_params()
    regime_ok, regime_message = validate_dark_regime(params)
    result = dark_residuals(scenario, scenario.check.samples, scenario.check.seed)
    failures = []
    if not regime_ok:
        failures.append(f"dark-state regime violated: {regime_message}")
    worst = max(v for v in (result["max_residual_d1"], result["max_residual_d2"]) if v is not None)
    if worst > tol.dark_residual:
        failures.append(f"kernel residual {worst:.3e} exceeds {tol.dark_residual:.0e}")
    summary = {
        **result,
        "regime_ok": regime_ok,
        "regime_message": regime_message,
        "tolerance": tol.dark_residual,
        "passed": not failures,
        "failures": failures,
    }
    path = write_json(_output(out_dir, scenario.outputs.summary_json, f"{scenario.scenario}_check_dark.json"), summary)
    return RunResult("check-dark", not failures, summary, failures, [path])


RUNNERS = {
    "fig2": run_fig2,
    "fig3": run_fig3,
    "stirap": run_stirap,
    "gate-report": run_gate_report,
    "sweep": run_sweep,
    "check-dark": run_check_dark,
}


def run_scenario(verb: str, scenario: ScenarioConfig, out_dir: str | Path) -> RunResult:
    if verb not in RUNNERS:
        raise ConfigurationError(f"Unknown verb {verb!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return RUNNERS[verb](scenario, out)
