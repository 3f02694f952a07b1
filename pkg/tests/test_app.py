"""Tests for the command-line interface."""

import importlib
import json
import math
import os
from unittest.mock import patch

import pytest

import app
import config
from src.commands import EXIT_INPUT, EXIT_OK, EXIT_VALIDATION, CliConfig, eval_options, method_spec, model_params
from src.density import density_batch
from src.errors import DomainError
from src.models import METHOD_NAMES, MethodKind, MethodSpec, SumStyle, method_name


def _rows(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


@pytest.fixture
def grid_file(tmp_path):
    """A small JSON grid."""
    path = tmp_path / "grid.json"
    path.write_text(json.dumps({"t": [0.3, 0.9], "a": [1.0, 2.0], "v": [-1.0, 1.0], "w": [0.4], "eta": [0.0, 1.0], "t0": 0.0001}))
    return str(path)


class TestEval:
    """Test suite for the eval command."""

    def test_inline_observation(self, capsys):
        """Test the canonical density from inline flags."""
        code = app.main(["eval", "--v", "0", "--a", "1", "--w", "0.5", "--t0", "0", "--rt", "1", "--choice", "lower"])
        assert code == EXIT_OK
        (row,) = _rows(capsys.readouterr().out)
        assert float(row["density"]) == pytest.approx(0.0225939679161388, abs=1e-6)
        assert row["timescale_used"] == "small"
        assert row["converged"] == "True"

    def test_one_evaluation_per_observation(self, capsys):
        """Test that the batch is evaluated once and density is exp(log_density)."""
        with patch("src.commands.evaluate.density_batch", wraps=density_batch) as batch:
            code = app.main(["eval", "--v", "1", "--a", "1.5", "--w", "0.4", "--t0", "0.2", "--rt", "0.8"])
        assert code == EXIT_OK
        assert batch.call_count == 1
        (row,) = _rows(capsys.readouterr().out)
        assert float(row["density"]) == pytest.approx(math.exp(float(row["log_density"])), rel=1e-15)

    def test_response_before_t0(self, capsys):
        """Test that rt <= t0 prints a zero density."""
        app.main(["eval", "--v", "0", "--a", "1", "--w", "0.5", "--t0", "0.3", "--rt", "0.2"])
        (row,) = _rows(capsys.readouterr().out)
        assert float(row["density"]) == 0.0
        assert row["log_density"] == "-inf"
        assert row["terms_used"] == "0"

    def test_start_point_flag(self, capsys):
        """Test that --z is converted with --a."""
        app.main(["eval", "--v", "0", "--a", "2", "--z", "1", "--rt", "1"])
        via_z = _rows(capsys.readouterr().out)[0]["density"]
        app.main(["eval", "--v", "0", "--a", "2", "--w", "0.5", "--rt", "1"])
        assert _rows(capsys.readouterr().out)[0]["density"] == via_z

    def test_file_input_and_log_flag(self, tmp_path):
        """Test file input, file output and an empty density column under --log."""
        source = tmp_path / "obs.csv"
        source.write_text("choice,rt\nlower,0.5\nupper,0.8\n")
        target = tmp_path / "eval.csv"
        code = app.main(["eval", "--v", "1", "--a", "1.5", "--w", "0.4", "--log",
                         "--input", str(source), "--output", str(target)])
        assert code == EXIT_OK
        rows = _rows(target.read_text())
        assert [r["choice"] for r in rows] == ["lower", "upper"]
        assert all(r["density"] == "" for r in rows)
        assert all(float(r["log_density"]) < 0 for r in rows)

    def test_unknown_method(self, capsys):
        """Test that an unknown method exits 2 and lists the valid names."""
        with pytest.raises(SystemExit) as exc_info:
            app.main(["eval", "--method", "bogus", "--v", "0", "--a", "1", "--w", "0.5", "--rt", "1"])
        assert exc_info.value.code == 2
        err = capsys.readouterr().err
        assert all(name in err for name in METHOD_NAMES)

    def test_missing_parameter(self, capsys):
        """Test that a missing boundary separation exits 2 naming the field."""
        assert app.main(["eval", "--v", "0", "--w", "0.5", "--rt", "1"]) == EXIT_INPUT
        assert "Invalid a" in capsys.readouterr().err

    def test_invalid_domain(self, capsys):
        """Test that w outside (0, 1) exits 2."""
        assert app.main(["eval", "--v", "0", "--a", "1", "--w", "1.5", "--rt", "1"]) == EXIT_INPUT
        assert "Invalid w" in capsys.readouterr().err

    def test_bad_row_in_file(self, tmp_path, capsys):
        """Test that a malformed input row exits 2 naming the row."""
        source = tmp_path / "obs.csv"
        source.write_text("choice,rt\nlower,0.5\nlower,-1\n")
        assert app.main(["eval", "--v", "0", "--a", "1", "--w", "0.5", "--input", str(source)]) == EXIT_INPUT
        assert "row 2" in capsys.readouterr().err


class TestSimulateCommand:
    """Test suite for the simulate command."""

    def _run(self, path):
        return app.main(["simulate", "--a", "1", "--v-c1", "1", "--v-c2", "-0.5", "--w", "0.5", "--t0", "0.3",
                         "--eta", "0.5", "--n-per-class", "30", "--participants", "2", "--seed", "7",
                         "--output", str(path)])

    def test_deterministic_output(self, tmp_path):
        """Test that the same seed writes byte-identical files."""
        assert self._run(tmp_path / "a.csv") == EXIT_OK
        assert self._run(tmp_path / "b.csv") == EXIT_OK
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        rows = _rows((tmp_path / "a.csv").read_text())
        assert len(rows) == 120
        assert {r["participant"] for r in rows} == {"p01", "p02"}


class TestFitCommand:
    """Test suite for the fit command."""

    def test_writes_results(self, tmp_path):
        """Test that fit writes one JSON record per start."""
        data = tmp_path / "data.csv"
        app.main(["simulate", "--a", "1", "--v-c1", "1", "--v-c2", "-0.5", "--w", "0.5", "--t0", "0.3",
                  "--n-per-class", "30", "--seed", "1", "--output", str(data)])
        output = tmp_path / "fit.json"
        assert app.main(["fit", "--input", str(data), "--starts", "2", "--output", str(output)]) == EXIT_OK
        results = json.loads(output.read_text())
        assert [r["start_index"] for r in results] == [0, 1]
        assert all(r["participant"] == "p01" for r in results)

    def test_needs_input(self):
        """Test that fit without --input exits 2."""
        assert app.main(["fit"]) == EXIT_INPUT


class TestBenchCommand:
    """Test suite for the bench command."""

    def test_vectorized_cardinality(self, tmp_path, grid_file):
        """Test thirteen records per grid point and a summary file."""
        output = tmp_path / "bench.csv"
        code = app.main(["bench", "--grid", "file", "--grid-file", grid_file, "--reps", "2", "--output", str(output)])
        assert code == EXIT_OK
        rows = _rows(output.read_text())
        assert len(rows) == 13 * 8
        summary = json.loads((tmp_path / "bench_summary.json").read_text())
        assert summary["experiment"] == "vectorized"
        assert "combined-swse-17/delta=1" in summary["methods"]

    def test_single_method(self, tmp_path, grid_file):
        """Test that --method restricts the sweep."""
        output = tmp_path / "bench.csv"
        app.main(["bench", "--experiment", "individual", "--method", "small-gon-14", "--grid", "file",
                  "--grid-file", grid_file, "--reps", "1", "--output", str(output)])
        rows = _rows(output.read_text())
        assert len(rows) == 8 * 2
        assert {(r["method"], r["style"]) for r in rows} == {("small-gon", "14")}

    def test_delta_fit_experiment(self, tmp_path):
        """Test one record and one fit summary per (delta, style) candidate."""
        data = tmp_path / "data.csv"
        app.main(["simulate", "--a", "1", "--v-c1", "1", "--v-c2", "-0.5", "--w", "0.5", "--t0", "0.3",
                  "--n-per-class", "20", "--seed", "3", "--output", str(data)])
        output = tmp_path / "delta_fit.csv"
        code = app.main(["bench", "--experiment", "delta-fit", "--input", str(data), "--starts", "1",
                         "--reps", "1", "--output", str(output)])
        assert code == EXIT_OK
        rows = _rows(output.read_text())
        assert len(rows) == len(config.BENCH_DELTAS) * 2
        assert {(r["style"], int(r["delta"])) for r in rows} == {
            (style, delta) for style in ("14", "17") for delta in config.BENCH_DELTAS
        }
        assert {r["dataset"] for r in rows} == {"p01"}
        fits = json.loads((tmp_path / "delta_fit_summary.json").read_text())["fits"]
        assert len({(f["method"], f["delta"]) for f in fits}) == len(config.BENCH_DELTAS) * 2

    def test_grid_file_required(self):
        """Test that --grid file without --grid-file exits 2."""
        assert app.main(["bench", "--grid", "file"]) == EXIT_INPUT


class TestValidateCommand:
    """Test suite for the validate command."""

    def test_passes_on_small_grid(self, tmp_path, grid_file):
        """Test that the default method validates on a small grid."""
        report = tmp_path / "report.json"
        assert app.main(["validate", "--grid", "file", "--grid-file", grid_file, "--output", str(report)]) == EXIT_OK
        data = json.loads(report.read_text())
        assert data["points"] == 16
        assert data["inaccurate"] == 0
        assert len(data["normalization"]) == 8

    def test_failure_exits_three(self, tmp_path, grid_file):
        """Test that a normalization miss exits 3."""
        with patch("src.commands.validate.check_normalization", return_value=0.9):
            code = app.main(["validate", "--grid", "file", "--grid-file", grid_file, "--output", str(tmp_path / "r.json")])
        assert code == EXIT_VALIDATION


class TestCliConfig:
    """Test suite for CLI helpers."""

    def test_environment_default_eps(self):
        """Test that FPT_EPS reaches the evaluation options through config."""
        with patch.dict(os.environ, {"FPT_EPS": "1e-9"}):
            importlib.reload(config)
            assert eval_options(CliConfig("eval")).eps == 1e-9
        importlib.reload(config)
        assert eval_options(CliConfig("eval")).eps == config.DEFAULT_EPS

    def test_method_names_resolve(self):
        """Test that every CLI method name selects the method carrying that name."""
        for name in METHOD_NAMES:
            assert method_name(method_spec(CliConfig("eval", method=name))) == name
        assert method_spec(CliConfig("eval")) == MethodSpec(MethodKind.COMBINED_SWSE, SumStyle.S17)

    def test_w_and_z_are_exclusive(self):
        """Test that --w and --z together are refused."""
        with pytest.raises(ValueError):
            model_params(CliConfig("eval", v=0.0, a=1.0, w=0.5, z=0.5))

    def test_sigma_defaults_to_one(self):
        """Test default t0, eta and sigma2."""
        params = model_params(CliConfig("eval", v=0.3, a=1.0, w=0.5))
        assert (params.t0, params.eta, params.sigma2) == (0.0, 0.0, 1.0)

    def test_z_needs_a(self):
        """Test that --z without --a names a."""
        with pytest.raises(DomainError) as exc_info:
            model_params(CliConfig("eval", v=0.0, z=0.5))
        assert exc_info.value.field == "a"
