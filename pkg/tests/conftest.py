import math

import numpy as np
import pytest

from src.model.nine_level import FineStructure
from src.pulses.schedule import PulseSchedule
from src.scenarios.config import ScenarioConfig
from src.scenarios.defaults import NV_FINE_STRUCTURE, default_scenario

# Excited-state splittings shrunk so nine-level runs need ~2e4 steps per µs.
TEST_SPLITTING_SCALE = 0.05


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def designed_schedule():
    return PulseSchedule(chi=-math.pi / 4, phi=0.0, omega0=20.0, alpha=1.0)


@pytest.fixture
def frozen_schedule():
    """Zero drive with a finite two-photon detuning."""
    return PulseSchedule(
        omega0=20.0,
        envelope_kind="constant",
        constant={"pump_amplitude": 0.0, "stokes_amplitude": 0.0},
    )


@pytest.fixture
def stirap_schedule():
    return default_scenario("stirap").pulse


@pytest.fixture
def fig3_scenario():
    return default_scenario("fig3")


@pytest.fixture
def frozen_scenario(frozen_schedule):
    return ScenarioConfig(
        scenario="frozen",
        pulse=frozen_schedule,
        grid={"t0_us": 0.0, "tf_us": 1.0, "steps": 200},
        checks={"target_amplitudes": None, "max_excited": None},
    )


@pytest.fixture
def fine_structure():
    return FineStructure.model_validate(NV_FINE_STRUCTURE)


@pytest.fixture
def small_fine_structure(fine_structure):
    return fine_structure.scaled(TEST_SPLITTING_SCALE)


@pytest.fixture
def fig2_scenario():
    """Selection-rule run with shrunken splittings and a matching grid."""
    scenario = default_scenario("fig2")
    return scenario.model_copy(
        update={
            "fine_structure_scale": TEST_SPLITTING_SCALE,
            "grid": scenario.grid.model_copy(update={"steps": 20000}),
        }
    )
