"""Tests for DataManager file handling."""

import json
import math

import pytest

from src.data_manager import DataManager
from src.errors import DomainError, InputError
from src.models import (
    BenchRecord,
    Choice,
    Convergence,
    Dataset,
    FitResult,
    StimulusClass,
    Trial,
)


@pytest.fixture
def manager():
    """A DataManager instance."""
    return DataManager()


def _write(path, text):
    path.write_text(text)
    return str(path)


class TestDatasets:
    """Test suite for dataset files."""

    def test_save_and_load(self, manager, tmp_path):
        """Test that a saved dataset loads back with full precision."""
        data = Dataset([
            Trial("p01", StimulusClass.C1, Choice.UPPER, 0.1 + 0.2),
            Trial("p02", StimulusClass.C2, Choice.LOWER, 1.0 / 3.0),
        ])
        path = str(tmp_path / "out" / "data.csv")
        manager.save_dataset(data, path)
        assert manager.load_dataset(path).rows == data.rows

    def test_header(self, manager, tmp_path):
        """Test the dataset column order."""
        path = str(tmp_path / "data.csv")
        manager.save_dataset(Dataset([Trial("p01", StimulusClass.C1, Choice.UPPER, 0.5)]), path)
        assert open(path).readline().strip() == "participant,stimulus_class,choice,rt"

    def test_case_insensitive_labels(self, manager, tmp_path):
        """Test that labels are matched case-insensitively."""
        path = _write(tmp_path / "d.csv", "participant,stimulus_class,choice,rt\np01,C1,Upper,0.5\n")
        assert manager.load_dataset(path).rows[0].choice is Choice.UPPER

    def test_missing_column(self, manager, tmp_path):
        """Test that a missing column is named."""
        path = _write(tmp_path / "d.csv", "participant,choice,rt\np01,upper,0.5\n")
        with pytest.raises(InputError) as exc_info:
            manager.load_dataset(path)
        assert exc_info.value.field == "stimulus_class"

    def test_bad_choice(self, manager, tmp_path):
        """Test that an unknown choice names the row."""
        path = _write(tmp_path / "d.csv", "participant,stimulus_class,choice,rt\np01,c1,upper,0.5\np01,c1,middle,0.6\n")
        with pytest.raises(InputError) as exc_info:
            manager.load_dataset(path)
        assert exc_info.value.row == 2
        assert "middle" in str(exc_info.value)

    def test_non_numeric_rt(self, manager, tmp_path):
        """Test that a non-numeric rt raises InputError."""
        path = _write(tmp_path / "d.csv", "participant,stimulus_class,choice,rt\np01,c1,upper,fast\n")
        with pytest.raises(InputError) as exc_info:
            manager.load_dataset(path)
        assert exc_info.value.field == "rt"

    def test_negative_rt(self, manager, tmp_path):
        """Test that a negative rt raises DomainError naming the row."""
        path = _write(tmp_path / "d.csv", "participant,stimulus_class,choice,rt\np01,c1,upper,-0.5\n")
        with pytest.raises(DomainError) as exc_info:
            manager.load_dataset(path)
        assert exc_info.value.row == 1
        assert "row 1" in str(exc_info.value)

    def test_missing_file(self, manager, tmp_path):
        """Test that an unreadable file raises InputError."""
        with pytest.raises(InputError):
            manager.load_dataset(str(tmp_path / "absent.csv"))


class TestObservations:
    """Test suite for observation and evaluation files."""

    def test_load(self, manager, tmp_path):
        """Test loading choice,rt rows."""
        path = _write(tmp_path / "obs.csv", "choice,rt\nlower,0.4\nupper,1.25\n")
        observations = manager.load_observations(path)
        assert [(o.choice, o.rt) for o in observations] == [(Choice.LOWER, 0.4), (Choice.UPPER, 1.25)]

    def test_evaluations_print_seventeen_digits(self, manager, tmp_path):
        """Test that densities are written with enough digits to round-trip."""
        value = 0.022593704409080584
        row = {"choice": "lower", "rt": 1.0, "density": value, "log_density": math.log(value),
               "terms_used": 6, "timescale_used": "small", "converged": True}
        path = str(tmp_path / "eval.csv")
        manager.save_evaluations([row], path)
        header, line = open(path).read().splitlines()
        assert header == "choice,rt,density,log_density,terms_used,timescale_used,converged"
        cells = line.split(",")
        assert float(cells[2]) == value
        assert float(cells[3]) == math.log(value)
        assert cells[4:] == ["6", "small", "True"]

    def test_evaluations_to_stdout(self, manager, capsys):
        """Test that no path writes to stdout."""
        manager.save_evaluations([], None)
        assert capsys.readouterr().out.strip() == "choice,rt,density,log_density,terms_used,timescale_used,converged"


class TestFitResults:
    """Test suite for fit result files."""

    def test_save_and_load(self, manager, tmp_path):
        """Test that results survive a save and load, including an infinite objective."""
        results = [
            FitResult({"a": 1.0, "v_c1": 0.5}, 12.5, Convergence.SUCCESS, 40, 0, "p01", "ok"),
            FitResult({"a": 2.0, "v_c1": -0.5}, math.inf, Convergence.FAILURE, 3, 1, "p01", "abnormal"),
        ]
        path = str(tmp_path / "fit.json")
        manager.save_fit_results(results, path)
        with open(path) as f:
            data = json.load(f)
        assert data[0]["convergence"] == "success"
        assert data[1]["objective"] == "inf"
        assert manager.load_fit_results(path) == results


class TestBenchRecords:
    """Test suite for benchmark output."""

    def _record(self, delta=None, dataset=None):
        return BenchRecord(
            method="combined-swse", style="17", delta=delta, t=None, a=1.0, v=0.0, w=0.5, eta=0.0, t_hat=None,
            median_ns=1200, p10_ns=1100, p90_ns=1500, min_ns=1000, max_ns=2000, reps=10,
            terms_used=8, converged=True, dataset=dataset,
        )

    def test_columns_and_integer_delta(self, manager, tmp_path):
        """Test the header, integer deltas and empty optional cells."""
        path = str(tmp_path / "bench.csv")
        manager.save_bench_records([self._record(delta=3), self._record()], path)
        lines = open(path).read().splitlines()
        assert lines[0] == (
            "method,style,delta,t,a,v,w,eta,t_hat,median_ns,p10_ns,p90_ns,min_ns,max_ns,reps,terms_used,converged"
        )
        assert lines[1].startswith("combined-swse,17,3,,1,0,0.5,0,,1200,")
        assert lines[2].startswith("combined-swse,17,,,")

    def test_dataset_column_for_fit_benchmarks(self, manager, tmp_path):
        """Test that a dataset column is appended when records carry one."""
        path = str(tmp_path / "bench.csv")
        manager.save_bench_records([self._record(dataset="p01")], path)
        header = open(path).readline().strip()
        assert header.endswith(",converged,dataset")


class TestGrids:
    """Test suite for grid files."""

    def test_load(self, manager, tmp_path):
        """Test loading a JSON grid."""
        path = _write(tmp_path / "grid.json", json.dumps(
            {"t": [0.5, 1], "a": [1], "v": [0, 1], "w": [0.5], "eta": [0], "t0": 0.1}
        ))
        grid = manager.load_grid(path)
        assert grid.t == (0.5, 1.0)
        assert len(list(grid.points())) == 2

    def test_missing_key(self, manager, tmp_path):
        """Test that a missing key is named."""
        path = _write(tmp_path / "grid.json", json.dumps({"t": [1], "a": [1], "v": [0], "w": [0.5], "eta": [0]}))
        with pytest.raises(InputError) as exc_info:
            manager.load_grid(path)
        assert exc_info.value.field == "t0"

    def test_malformed_json(self, manager, tmp_path):
        """Test that invalid JSON raises InputError."""
        with pytest.raises(InputError):
            manager.load_grid(_write(tmp_path / "grid.json", "{not json"))
