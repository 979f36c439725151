"""Embedded default scenarios, one per CLI verb.

The same documents are committed under ``configs/`` so that every run can be
reproduced from a file; ``nvholo print-config --scenario NAME`` prints them.
"""

import copy
import math

from src.scenarios.config import ScenarioConfig
from src.utils.errors import ConfigurationError

# Frequencies quoted in MHz are read as angular (rad/µs); see the unit suffixes.
NV_FINE_STRUCTURE = {
    "ground_splitting_MHz_angular": 2870.0,
    "A1_MHz_angular": -5460.0,
    "A2_MHz_angular": -2360.0,
    "Ex_MHz_angular": 0.0,
    "Ey_MHz_angular": 0.0,
    "Epx_MHz_angular": 6750.0,
    "Epy_MHz_angular": 6750.0,
    "provenance": (
        "Excited-state fine structure from Doherty et al., Phys. Rep. 528, 1 (2013): "
        "spin-spin 1.42 GHz, axial spin-orbit 5.33 GHz, non-axial spin-spin 1.55 GHz, "
        "energies relative to Ex/Ey; ground zero-field splitting 2.87 GHz"
    ),
}

DESIGNED_PULSE = {
    "chi_rad": -math.pi / 4,
    "phi_rad": 0.0,
    "omega0_MHz_angular": 20.0,
    "alpha_MHz_angular": 1.0,
    "envelope_kind": "designed",
}

DEFAULT_SCENARIOS: dict[str, dict] = {
    "fig3": {
        "scenario": "fig3",
        "model": "four_level",
        "pulse": DESIGNED_PULSE,
        "grid": {"steps": 48000},
        "initial_state": "1",
        "outputs": {
            "trajectory_csv": "fig3_trajectory.csv",
            "report_json": "fig3_gate_report.json",
        },
    },
    "fig2": {
        "scenario": "fig2",
        "model": "nine_level",
        "pulse": {
            "omega0_MHz_angular": 10.0,
            "envelope_kind": "constant",
            "constant": {"pump_amplitude_MHz_angular": 14.0, "stokes_amplitude_MHz_angular": 14.0},
        },
        "fine_structure": NV_FINE_STRUCTURE,
        "grid": {"t0_us": 0.0, "tf_us": 1.0, "steps": 200000},
        "initial_state": "ms-1",
        "outputs": {"trajectory_csv": "fig2_trajectory.csv", "summary_json": "fig2_summary.json"},
    },
    "stirap": {
        "scenario": "stirap",
        "model": "four_level",
        "pulse": {
            "omega0_MHz_angular": 0.0,
            "envelope_kind": "gaussian_stirap",
            "gaussian": {
                "pump_amplitude_MHz_angular": 40.0,
                "pump_center_us": 0.5,
                "pump_width_us": 1.0,
                "stokes_amplitude_MHz_angular": 40.0,
                "stokes_center_us": -0.5,
                "stokes_width_us": 1.0,
            },
        },
        "grid": {"t0_us": -6.0, "tf_us": 6.0, "steps": 24000},
        "initial_state": "1",
        "outputs": {"trajectory_csv": "stirap_trajectory.csv", "summary_json": "stirap_summary.json"},
    },
    "gate-report": {
        "scenario": "gate-report",
        "model": "four_level",
        "pulse": DESIGNED_PULSE,
        "grid": {"steps": 48000},
        "outputs": {"report_json": "gate_report.json"},
    },
    "sweep": {
        "scenario": "sweep",
        "model": "four_level",
        "pulse": DESIGNED_PULSE,
        "grid": {"steps": 48000},
        "sweep": {"axis": "alpha", "values": [4.0, 2.0, 1.0, 0.5]},
        "checks": {"monotone_infidelity": True},
        "outputs": {"sweep_csv": "sweep.csv"},
    },
    "check-dark": {
        "scenario": "check-dark",
        "model": "four_level",
        "pulse": DESIGNED_PULSE,
        "check": {"samples": 200, "seed": 0},
        "outputs": {"summary_json": "check_dark.json"},
    },
}


def scenario_names() -> list[str]:
    return sorted(DEFAULT_SCENARIOS)


def default_document(name: str) -> dict:
    if name not in DEFAULT_SCENARIOS:
        raise ConfigurationError(
            f"Unknown scenario {name!r}; choose one of {', '.join(scenario_names())}"
        )
    return copy.deepcopy(DEFAULT_SCENARIOS[name])


def default_scenario(name: str) -> ScenarioConfig:
    return ScenarioConfig.model_validate(default_document(name))
