"""Data management utilities for persistent storage."""

import json
import logging
import math
import os
import sys
from typing import Dict, List, Optional, Sequence

import pandas as pd

from src.errors import DomainError, InputError
from src.models import (
    BENCH_COLUMNS,
    BenchRecord,
    Choice,
    Convergence,
    Dataset,
    FitResult,
    Observation,
    ParamGrid,
    StimulusClass,
    Trial,
)

# Configure logging
logger = logging.getLogger(__name__)

DATASET_COLUMNS = ["participant", "stimulus_class", "choice", "rt"]
OBSERVATION_COLUMNS = ["choice", "rt"]
EVAL_COLUMNS = ["choice", "rt", "density", "log_density", "terms_used", "timescale_used", "converged"]
FLOAT_FORMAT = "%.17g"
STDOUT = "-"


def _finite_or_text(value):
    """Replace non-finite floats with their repr so files stay valid JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {key: _finite_or_text(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_finite_or_text(item) for item in value]
    return value


class DataManager:
    """Reads and writes datasets, evaluations, fit results and benchmark output."""

    def _ensure_parent(self, path: str):
        """Ensure the directory of an output file exists."""
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)

    def _read_csv(self, path: str, columns: Sequence[str]) -> pd.DataFrame:
        """Read a CSV file and check that it has the expected columns."""
        try:
            frame = pd.read_csv(path, dtype=str, keep_default_na=False)
        except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            logger.error(f"Failed to read {path}: {str(e)}")
            raise InputError(f"Cannot read {path}: {str(e)}") from e
        missing = [column for column in columns if column not in frame.columns]
        if missing:
            logger.error(f"{path} is missing columns {missing}")
            raise InputError(f"{path} is missing column(s) {', '.join(missing)}", field=missing[0])
        return frame

    def _write_csv(self, frame: pd.DataFrame, path: Optional[str]):
        """Write a frame with 17 significant digits, to stdout when path is '-' or None."""
        if path in (None, STDOUT):
            frame.to_csv(sys.stdout, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
            return
        self._ensure_parent(path)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info(f"Wrote {len(frame)} rows to {path}")

    def _write_json(self, data, path: Optional[str]):
        """Save data as indented JSON."""
        text = json.dumps(_finite_or_text(data), indent=2)
        if path in (None, STDOUT):
            sys.stdout.write(text + "\n")
            return
        self._ensure_parent(path)
        with open(path, 'w') as f:
            f.write(text + "\n")
        logger.info(f"Wrote {path}")

    @staticmethod
    def _parse_rt(text: str, row: int) -> float:
        try:
            rt = float(text)
        except ValueError:
            raise InputError(f"Row {row}: rt {text!r} is not a number", field="rt", row=row) from None
        if not math.isfinite(rt) or rt <= 0:
            raise DomainError("rt", f"must be finite and positive, got {text!r}", row=row)
        return rt

    @staticmethod
    def _parse_enum(enum_type, text: str, field: str, row: int):
        try:
            return enum_type(text.strip().lower())
        except ValueError:
            valid = ", ".join(member.value for member in enum_type)
            raise InputError(f"Row {row}: {field} {text!r} is not one of {valid}", field=field, row=row) from None

    # Datasets
    def load_dataset(self, path: str) -> Dataset:
        """Load a participant,stimulus_class,choice,rt CSV.

        Args:
            path: CSV file path

        Returns:
            Dataset with one Trial per row

        Raises:
            InputError: If the file or a value cannot be parsed
            DomainError: If a response time is not positive
        """
        frame = self._read_csv(path, DATASET_COLUMNS)
        rows = []
        for index, record in enumerate(frame.to_dict("records"), start=1):
            rows.append(Trial(
                participant=record["participant"],
                stimulus_class=self._parse_enum(StimulusClass, record["stimulus_class"], "stimulus_class", index),
                choice=self._parse_enum(Choice, record["choice"], "choice", index),
                rt=self._parse_rt(record["rt"], index),
            ))
        logger.info(f"Loaded {len(rows)} trials from {path}")
        return Dataset(rows)

    def save_dataset(self, dataset: Dataset, path: Optional[str]):
        """Save a dataset as CSV."""
        frame = pd.DataFrame([row.to_dict() for row in dataset.rows], columns=DATASET_COLUMNS)
        self._write_csv(frame, path)

    # Observations and evaluations
    def load_observations(self, path: str) -> List[Observation]:
        """Load a choice,rt CSV."""
        frame = self._read_csv(path, OBSERVATION_COLUMNS)
        observations = [
            Observation(
                self._parse_enum(Choice, record["choice"], "choice", index),
                self._parse_rt(record["rt"], index),
            )
            for index, record in enumerate(frame.to_dict("records"), start=1)
        ]
        logger.info(f"Loaded {len(observations)} observations from {path}")
        return observations

    def save_evaluations(self, rows: List[Dict], path: Optional[str]):
        """Save density evaluation rows."""
        self._write_csv(pd.DataFrame(rows, columns=EVAL_COLUMNS), path)

    # Fit results
    def save_fit_results(self, results: List[FitResult], path: Optional[str]):
        """Save fit results as a JSON list, one record per (participant, start)."""
        self._write_json([result.to_dict() for result in results], path)

    def load_fit_results(self, path: str) -> List[FitResult]:
        """Load fit results saved by save_fit_results."""
        try:
            with open(path, 'r') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Failed to read {path}: {str(e)}")
            raise InputError(f"Cannot read {path}: {str(e)}") from e
        results = []
        for item in data:
            item = dict(item)
            item["convergence"] = Convergence(item["convergence"])
            if isinstance(item["objective"], str):
                item["objective"] = float(item["objective"])
            results.append(FitResult(**item))
        return results

    # Benchmarks
    def save_bench_records(self, records: List[BenchRecord], path: Optional[str]):
        """Save benchmark records in long format; a dataset column is added for fit benchmarks."""
        columns = list(BENCH_COLUMNS)
        if any(record.dataset is not None for record in records):
            columns.append("dataset")
        frame = pd.DataFrame([record.to_dict() for record in records], columns=columns)
        frame["delta"] = frame["delta"].astype("Int64")
        self._write_csv(frame, path)

    def save_summary(self, summary: Dict, path: Optional[str]):
        """Save a JSON summary."""
        self._write_json(summary, path)

    # Grids
    def load_grid(self, path: str) -> ParamGrid:
        """Load a JSON grid with keys t, a, v, w, eta and t0."""
        try:
            with open(path, 'r') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Failed to read grid {path}: {str(e)}")
            raise InputError(f"Cannot read grid {path}: {str(e)}") from e
        grid = ParamGrid.from_dict(data)
        logger.info(f"Loaded grid from {path} with {len(grid.t)} response times")
        return grid
