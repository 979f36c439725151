import json
import math

import numpy as np

from src.scenarios.writers import dumps_json, frame_from_columns, write_csv, write_json


class TestJson:
    def test_twelve_significant_digits(self):
        payload = json.loads(dumps_json({"x": math.pi}))
        assert payload["x"] == 3.14159265359

    def test_non_finite_becomes_null(self):
        assert json.loads(dumps_json({"a": math.nan, "b": math.inf})) == {"a": None, "b": None}

    def test_numpy_scalars_and_tuples(self):
        payload = json.loads(dumps_json({"a": np.float64(0.5), "b": (1.0, np.int64(2))}))
        assert payload == {"a": 0.5, "b": [1.0, 2]}

    def test_negative_zero_normalized(self):
        assert dumps_json({"x": -0.0}) == dumps_json({"x": 0.0})

    def test_write_json_uses_unix_newlines(self, tmp_path):
        path = write_json(tmp_path / "sub" / "out.json", {"b": 1, "a": [1.5]})
        raw = path.read_bytes()
        assert b"\r\n" not in raw
        assert raw.endswith(b"\n")
        assert json.loads(raw) == {"b": 1, "a": [1.5]}


class TestCsv:
    def test_time_axis_in_nanoseconds(self):
        frame = frame_from_columns(np.array([0.0, 0.001]), {"abs_c1": np.array([1.0, 0.5])})
        assert list(frame.columns) == ["t_ns", "abs_c1"]
        assert list(frame["t_ns"]) == [0.0, 1.0]

    def test_format(self, tmp_path):
        frame = frame_from_columns(np.array([0.0, 1e-3]), {"abs_c1": np.array([1 / 3, 1.0])})
        text = write_csv(tmp_path / "t.csv", frame).read_text(encoding="utf-8")
        assert text.splitlines() == ["t_ns,abs_c1", "0,0.333333333333", "1,1"]
        assert "\r" not in text

    def test_byte_identical_reruns(self, tmp_path):
        frame = frame_from_columns(np.linspace(0, 1, 11), {"v": np.sin(np.linspace(0, 1, 11))})
        first = write_csv(tmp_path / "a.csv", frame).read_bytes()
        second = write_csv(tmp_path / "b.csv", frame).read_bytes()
        assert first == second
