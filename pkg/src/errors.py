"""Exceptions raised by the density toolkit."""

from typing import Optional


class FptError(Exception):
    """Base class for toolkit errors."""


class DomainError(FptError, ValueError):
    """A parameter or observation outside its valid domain."""

    def __init__(self, field: str, message: str, row: Optional[int] = None):
        self.field = field
        self.row = row
        where = f" (row {row})" if row is not None else ""
        super().__init__(f"Invalid {field}{where}: {message}")


class InputError(FptError, ValueError):
    """Malformed input file, column or method name."""

    def __init__(self, message: str, field: Optional[str] = None, row: Optional[int] = None):
        self.field = field
        self.row = row
        super().__init__(message)


class OracleDisagreement(FptError, ArithmeticError):
    """Large-time and small-time reference sums disagree."""

    def __init__(self, large_value: float, small_value: float, tolerance: float):
        self.large_value = large_value
        self.small_value = small_value
        self.tolerance = tolerance
        super().__init__(
            f"Oracle timescales disagree: large={large_value!r}, small={small_value!r}, "
            f"tolerance={tolerance!r}"
        )


class TrialTimeout(FptError, RuntimeError):
    """Simulated trials that never crossed a boundary."""

    def __init__(self, n_trials: int, max_time: float):
        self.n_trials = n_trials
        self.max_time = max_time
        super().__init__(f"{n_trials} trial(s) did not cross a boundary within {max_time} s")
