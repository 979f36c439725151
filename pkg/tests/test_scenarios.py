import json
import math
from pathlib import Path

import numpy as np
import pytest

from src.scenarios.config import ScenarioConfig, SweepConfig, load_scenario, parse_scenario
from src.scenarios.defaults import default_document, default_scenario, scenario_names
from src.utils.errors import ConfigurationError

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


# ── Embedded defaults ───────────────────────────────────────────────────


class TestDefaults:
    def test_one_scenario_per_verb(self):
        assert scenario_names() == ["check-dark", "fig2", "fig3", "gate-report", "stirap", "sweep"]

    @pytest.mark.parametrize("name", ["check-dark", "fig2", "fig3", "gate-report", "stirap", "sweep"])
    def test_committed_config_matches_default(self, name):
        assert load_scenario(CONFIG_DIR / f"{name}.json") == default_scenario(name)

    @pytest.mark.parametrize("name", ["gate-report-lab-oracle.json", "gate-report-nine-level.json"])
    def test_extra_configs_load(self, name):
        scenario = load_scenario(CONFIG_DIR / name)
        assert scenario.checks.min_fidelity is None

    def test_unknown_scenario(self):
        with pytest.raises(ConfigurationError, match="choose one of"):
            default_document("fig4")

    def test_documents_are_copies(self):
        document = default_document("fig3")
        document["pulse"]["alpha_MHz_angular"] = 9.0
        assert default_scenario("fig3").pulse.alpha == 1.0

    def test_fig3_parameters(self):
        scenario = default_scenario("fig3")
        assert scenario.pulse.chi == pytest.approx(-math.pi / 4)
        assert scenario.pulse.omega0 == 20.0
        grid = scenario.time_grid()
        assert (grid.t0, grid.tf, grid.steps) == (-8.0, 8.0, 48000)


# ── Diagnostics ─────────────────────────────────────────────────────────


class TestParseScenario:
    def test_unknown_key_reports_line(self):
        text = '{\n  "scenario": "x",\n  "bogus": 1\n}\n'
        with pytest.raises(ConfigurationError, match=r"cfg\.json:3: bogus: Extra inputs"):
            parse_scenario(text, "cfg.json")

    def test_nested_field_reports_dotted_path(self):
        text = '{\n  "scenario": "x",\n  "pulse": {\n    "omega0_MHz_angular": -1\n  }\n}\n'
        with pytest.raises(ConfigurationError, match=r"cfg\.json:4: pulse\.omega0_MHz_angular"):
            parse_scenario(text, "cfg.json")

    def test_malformed_json(self):
        with pytest.raises(ConfigurationError, match="cfg.json:1:.*invalid JSON"):
            parse_scenario("{scenario: x}", "cfg.json")

    def test_unknown_tolerance_key(self):
        with pytest.raises(ConfigurationError, match="unknown tolerance keys: closer"):
            parse_scenario(json.dumps({"scenario": "x", "tolerances": {"closer": 1}}))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="Cannot read"):
            load_scenario(tmp_path / "nope.json")

    @pytest.mark.parametrize(
        "document, location",
        [
            ({"pulse": {"omega0": 20, "alpha": 1}}, r"pulse\.omega0: Extra inputs"),
            ({"grid": {"t0": -8, "tf": 8, "steps": 100}}, r"grid\.t0: Extra inputs"),
            ({"detunings": {"delta1": 20}}, r"detunings\.delta1: Extra inputs"),
            ({"target_gamma": 0.3}, r"target_gamma: Extra inputs"),
            ({"rabi_overrides": {"p1": {"phase": 0.1}}}, r"rabi_overrides\.p1\.phase: Extra inputs"),
        ],
    )
    def test_keys_without_units_are_rejected(self, document, location):
        with pytest.raises(ConfigurationError, match=location):
            parse_scenario(json.dumps({"scenario": "x", **document}), "cfg.json")

    def test_nested_blocks_need_units_too(self):
        fine = {k: v for k, v in default_document("fig2")["fine_structure"].items() if k != "A1_MHz_angular"}
        fine["a1"] = -5460.0
        document = {**default_document("fig2"), "fine_structure": fine}
        with pytest.raises(ConfigurationError, match=r"fine_structure\.a1: Extra inputs"):
            parse_scenario(json.dumps(document), "cfg.json")

    def test_short_names_still_build_in_code(self):
        scenario = ScenarioConfig(scenario="x", grid={"t0": -8.0, "tf": 8.0, "steps": 100})
        assert scenario.time_grid().t0 == -8.0

    def test_reversed_grid_is_rejected_on_load(self):
        text = json.dumps({"scenario": "x", "grid": {"t0_us": 2.0, "tf_us": 1.0, "steps": 10}})
        with pytest.raises(ConfigurationError, match=r"grid \(t0_us, tf_us, steps\): Grid end 1.0 precedes"):
            parse_scenario(text, "cfg.json")

    def test_invalid_sweep_point_is_rejected_on_load(self):
        text = json.dumps({"scenario": "x", "sweep": {"axis": "alpha", "values": [2.0, 0.0]}})
        with pytest.raises(ConfigurationError, match=r"sweep\.values\[1\]: alpha = 0: Input should be greater than 0"):
            parse_scenario(text, "cfg.json")

    def test_step_sweep_below_two_is_rejected_on_load(self):
        text = json.dumps({"scenario": "x", "sweep": {"axis": "steps", "start": 1, "stop": 1, "count": 1}})
        with pytest.raises(ConfigurationError, match=r"sweep point 0: steps = 1: grid"):
            parse_scenario(text, "cfg.json")


# ── Builders ────────────────────────────────────────────────────────────


class TestBuilders:
    def test_tolerance_overrides(self):
        scenario = ScenarioConfig(scenario="x", tolerances={"stability_guard": 0.05})
        assert scenario.resolved_tolerances().stability_guard == 0.05

    def test_explicit_grid(self):
        scenario = default_scenario("stirap")
        grid = scenario.time_grid()
        assert (grid.t0, grid.tf, grid.steps) == (-6.0, 6.0, 24000)

    def test_initial_vector_labels(self):
        scenario = ScenarioConfig(scenario="x", initial_state="|2>")
        vector = scenario.initial_vector(scenario.build_model())
        assert np.array_equal(vector, [0, 1, 0, 0])

    def test_nine_level_initial_vector(self, fig2_scenario):
        model = fig2_scenario.build_model()
        assert fig2_scenario.initial_vector(model)[0] == 1

    def test_unknown_initial_state(self):
        scenario = ScenarioConfig(scenario="x", initial_state="5")
        with pytest.raises(ConfigurationError, match="initial_state"):
            scenario.initial_vector(scenario.build_model())

    def test_model_kinds(self):
        lab = ScenarioConfig(scenario="x", model="lab_oracle")
        assert lab.build_model().frame == "lab-oracle"
        assert ScenarioConfig(scenario="x").build_model().frame == "interaction"

    def test_with_overrides(self):
        scenario = default_scenario("check-dark").with_overrides(steps=100, seed=7)
        assert scenario.grid.steps == 100
        assert scenario.check.seed == 7
        assert default_scenario("check-dark").with_overrides() == default_scenario("check-dark")

    def test_run_id_is_stable_and_sensitive(self):
        first = default_scenario("fig3")
        assert first.run_id() == default_scenario("fig3").run_id()
        assert len(first.run_id()) == 12
        assert first.with_overrides(steps=1000).run_id() != first.run_id()


class TestSweepConfig:
    def test_explicit_values(self):
        assert SweepConfig(axis="alpha", values=(4.0, 2.0)).points() == [4.0, 2.0]

    def test_linear_range(self):
        assert SweepConfig(axis="omega0", start=10.0, stop=30.0, count=3).points() == [10.0, 20.0, 30.0]

    def test_log_range(self):
        points = SweepConfig(axis="alpha", start=0.5, stop=2.0, count=3, spacing="log").points()
        assert points == pytest.approx([0.5, 1.0, 2.0])

    def test_steps_are_integers(self):
        assert SweepConfig(axis="steps", values=(1000.4, 2000.0)).points() == [1000.0, 2000.0]

    def test_empty_sweep(self):
        with pytest.raises(ConfigurationError, match="empty sweep"):
            SweepConfig(axis="alpha", values=()).points()
