import json
from unittest.mock import patch

import pytest

from cli.main import EXIT_CONFIG, EXIT_OK, EXIT_PHYSICS, build_parser, main
from src.scenarios.defaults import default_document
from src.scenarios.runners import RunResult
from src.utils.errors import FrameDiscontinuityError


class TestParser:
    def test_run_verbs(self):
        args = build_parser().parse_args(["fig3", "--steps", "1000", "--seed", "4"])
        assert args.verb == "fig3"
        assert args.steps == 1000
        assert args.seed == 4
        assert str(args.out) == "out"

    def test_unknown_verb_exits(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["fig9"])


class TestPrintConfig:
    def test_prints_embedded_scenario(self, capsys):
        assert main(["print-config", "--scenario", "stirap"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out) == json.loads(json.dumps(default_document("stirap")))

    def test_prints_schema(self, capsys):
        assert main(["print-config", "--schema"]) == EXIT_OK
        schema = json.loads(capsys.readouterr().out)
        assert "omega0_MHz_angular" in json.dumps(schema)
        assert schema["title"] == "ScenarioConfig"


class TestExitCodes:
    def test_passing_run(self, tmp_path):
        with patch("cli.main.run_scenario", return_value=RunResult("fig3", True)) as run:
            assert main(["fig3", "--out", str(tmp_path), "--steps", "1000"]) == EXIT_OK
        scenario = run.call_args.args[1]
        assert scenario.grid.steps == 1000

    def test_failed_physics_check(self, tmp_path):
        result = RunResult("fig3", False, failures=["operator fidelity 0.9 below 0.999"])
        with patch("cli.main.run_scenario", return_value=result):
            assert main(["fig3", "--out", str(tmp_path)]) == EXIT_PHYSICS

    def test_numerical_error(self, tmp_path):
        with patch("cli.main.run_scenario", side_effect=FrameDiscontinuityError("[fig3] jump")):
            assert main(["fig3", "--out", str(tmp_path)]) == EXIT_PHYSICS

    def test_malformed_config(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "scenario": "x",\n  "bogus": 1\n}\n', encoding="utf-8")
        assert main(["fig3", "--config", str(path), "--out", str(tmp_path)]) == EXIT_CONFIG
        assert "bad.json:3: bogus" in capsys.readouterr().err

    def test_too_few_steps_is_a_config_error(self, tmp_path, capsys):
        assert main(["check-dark", "--steps", "1", "--out", str(tmp_path)]) == EXIT_CONFIG
        assert "grid (t0_us, tf_us, steps): Grid needs at least 2 steps, got 1" in capsys.readouterr().err

    def test_reversed_grid_is_a_config_error(self, tmp_path, capsys):
        path = tmp_path / "reversed.json"
        path.write_text(
            json.dumps({"scenario": "reversed", "grid": {"t0_us": 1.0, "tf_us": 0.0, "steps": 10}}),
            encoding="utf-8",
        )
        assert main(["check-dark", "--config", str(path), "--out", str(tmp_path)]) == EXIT_CONFIG
        assert "precedes start" in capsys.readouterr().err

    def test_invalid_sweep_value_is_a_config_error(self, tmp_path, capsys):
        path = tmp_path / "sweep.json"
        path.write_text(
            json.dumps({"scenario": "s", "sweep": {"axis": "alpha", "values": [1.0, 0.0]}}),
            encoding="utf-8",
        )
        assert main(["sweep", "--config", str(path), "--out", str(tmp_path)]) == EXIT_CONFIG
        assert "sweep.values[1]: alpha = 0" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        assert main(["fig3", "--config", str(tmp_path / "nope.json")]) == EXIT_CONFIG

    def test_invalid_environment(self, monkeypatch):
        monkeypatch.setattr("cli.main.get_config", lambda: type("C", (), {
            "validate_runtime": lambda self: ["LOG_LEVEL 'LOUD' is not a logging level"],
            "validate_numerics": lambda self: [],
        })())
        assert main(["print-config"]) == EXIT_CONFIG

    def test_check_dark_end_to_end(self, tmp_path):
        assert main(["check-dark", "--out", str(tmp_path), "--seed", "11"]) == EXIT_OK
        summary = json.loads((tmp_path / "check_dark.json").read_text(encoding="utf-8"))
        assert summary["seed"] == 11
        assert summary["passed"] is True
