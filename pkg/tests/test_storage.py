"""
Tests for the storage module.

This module contains unit tests for the staged result store and the run
manifest.
"""

import json
import math

import numpy as np
import pandas as pd
import pytest

from qpu_pulse_sim.core.errors import NumericError
from qpu_pulse_sim.storage import MANIFEST_NAME, ResultStore, RunManifest, dump_json


@pytest.fixture
def frame() -> pd.DataFrame:
    return pd.DataFrame({"t_us": [0.0, 1.0 / 3.0], "value": [np.float64(2.0), 1e-20]})


class TestResultStore:
    """Test staged writes and the atomic commit"""

    def test_commit_moves_files(self, tmp_path, frame):
        out = tmp_path / "run"
        with ResultStore(out) as store:
            store.write_frame("data.csv", frame)
            store.write_json("report.json", {"b": 1, "a": np.float64(0.5)})
            assert not (out / "data.csv").exists()
        assert sorted(p.name for p in out.iterdir()) == ["data.csv", "report.json"]
        assert store.files == ["data.csv", "report.json"]
        assert json.loads((out / "report.json").read_text()) == {"a": 0.5, "b": 1}

    def test_fixed_float_format(self, tmp_path, frame):
        with ResultStore(tmp_path) as store:
            store.write_frame("data.csv", frame)
        lines = (tmp_path / "data.csv").read_text().splitlines()
        assert lines[0] == "t_us,value"
        assert lines[2] == "0.333333333333,1e-20"

    def test_error_leaves_no_data(self, tmp_path, frame):
        out = tmp_path / "run"
        with pytest.raises(RuntimeError):
            with ResultStore(out) as store:
                store.write_frame("data.csv", frame)
                raise RuntimeError("boom")
        assert list(out.iterdir()) == []
        assert store.files == []

    def test_duplicate_name(self, tmp_path, frame):
        with pytest.raises(NumericError):
            with ResultStore(tmp_path) as store:
                store.write_frame("data.csv", frame)
                store.write_frame("data.csv", frame)

    def test_write_after_close(self, tmp_path, frame):
        store = ResultStore(tmp_path)
        with pytest.raises(NumericError):
            store.write_frame("data.csv", frame)


class TestJson:
    """Test JSON encoding of numerical values"""

    def test_numpy_and_complex(self):
        text = dump_json({"z": 1 + 2j, "arr": np.arange(3), "n": np.int64(4)})
        assert json.loads(text) == {"arr": [0, 1, 2], "n": 4, "z": [1.0, 2.0]}
        assert text.endswith("\n")

    def test_sorted_keys(self):
        assert dump_json({"b": 1, "a": 2}).index('"a"') < dump_json({"b": 1, "a": 2}).index('"b"')

    def test_unsupported_type(self):
        with pytest.raises(TypeError):
            dump_json({"x": object()})


class TestRunManifest:
    """Test the provenance record"""

    def test_write_and_read(self, tmp_path):
        manifest = RunManifest(
            experiment="t1",
            config_hash="ab" * 32,
            version="0.1.0",
            seed=3,
            started_at="2024-01-01T00:00:00+00:00",
            wall_time_s=1.5,
            files=["t1.csv", "report.json"],
            report={"T1_us": 85.0, "snr": math.inf},
        )
        path = manifest.write(tmp_path)
        assert path == tmp_path / MANIFEST_NAME
        assert [p.name for p in tmp_path.iterdir()] == [MANIFEST_NAME]
        assert RunManifest.read(path) == manifest
