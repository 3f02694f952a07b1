"""Tests for the reference density, its self-consistency and normalization."""

from unittest.mock import patch

import mpmath
import pytest

import config
from src.bench import table1_grid, table2_grid
from src.commands.validate import normalization_sets
from src.density import density
from src.errors import OracleDisagreement
from src.models import (
    ALL_METHODS,
    Choice,
    DdmParams,
    MethodKind,
    MethodSpec,
    Observation,
    OracleConfig,
    OracleEvaluation,
    SumStyle,
    Timescale,
)
from src.oracle import (
    agreement_tolerance,
    boundary_masses,
    check_normalization,
    method_tolerance,
    reference_density,
    reference_evaluation,
)

EPS = 1e-6


def _mp_canonical_density(n_terms=60):
    """Large-time series at v = 0, a = 1, w = 0.5, t = 1 in 40-digit arithmetic."""
    with mpmath.workdps(40):
        total = mpmath.fsum(
            j * mpmath.sin(j * mpmath.pi / 2) * mpmath.exp(-j * j * mpmath.pi ** 2 / 2) for j in range(1, n_terms + 1)
        )
        return float(mpmath.pi * total)


def _lower_points(grid):
    """Every (params, observation) of a grid on the lower boundary with t > t0."""
    return [
        (params, Observation(Choice.LOWER, t))
        for params in grid.points()
        for t in grid.t
        if t > params.t0
    ]


@pytest.fixture(scope="module")
def table2_reference():
    """Oracle evaluations over the Table 2 grid; the grid is symmetric in v and w, so Lower covers Upper."""
    return [(params, obs, reference_evaluation(params, obs)) for params, obs in _lower_points(table2_grid())]


class TestReferenceDensity:
    """Test suite for reference_density."""

    def test_canonical_value(self):
        """Test the reference value at v = 0, a = 1, w = 0.5, rt = 1."""
        value = reference_density(DdmParams(v=0, a=1, w=0.5), Observation(Choice.LOWER, 1.0))
        assert value == pytest.approx(_mp_canonical_density(), rel=1e-13)

    def test_degenerate(self):
        """Test that rt <= t0 gives 0."""
        assert reference_density(DdmParams(v=0, a=1, w=0.5, t0=0.5), Observation(Choice.LOWER, 0.5)) == 0.0

    def test_disagreement_raises(self):
        """Test that diverging timescale values raise OracleDisagreement."""
        evaluation = OracleEvaluation(1.0, 2.0, 1.0, 0.0, 0.0)
        with patch("src.oracle.reference_evaluation", return_value=evaluation):
            with pytest.raises(OracleDisagreement) as exc_info:
                reference_density(DdmParams(v=0, a=1, w=0.5), Observation(Choice.LOWER, 1.0))
        assert exc_info.value.large_value == 2.0
        assert exc_info.value.small_value == 1.0

    def test_small_config_rejected(self):
        """Test that fewer than 100 oracle terms are refused."""
        with pytest.raises(ValueError):
            OracleConfig(n_terms=10)

    @pytest.mark.parametrize("params, rt", [
        (DdmParams(v=0, a=1, w=0.5), 1.0),
        (DdmParams(v=-2, a=2.5, w=0.3, eta=1.0, t0=0.0001), 0.7),
        (DdmParams(v=5, a=0.5, w=0.7, t0=0.0001), 0.2),
        (DdmParams(v=2, a=3.5, w=0.4, eta=3.5, t0=0.0001), 2.0),
    ])
    def test_doubling_terms_changes_nothing(self, params, rt):
        """Test that doubling the oracle term count moves values by less than 1e-14 relative."""
        obs = Observation(Choice.LOWER, rt)
        base = reference_density(params, obs)
        doubled = reference_density(params, obs, OracleConfig(n_terms=2 * config.ORACLE_N_TERMS))
        assert doubled == pytest.approx(base, rel=1e-14, abs=1e-300)


class TestSelfConsistency:
    """Test suite for agreement of the two reference series."""

    def test_table1_grid(self):
        """Test that both series agree at every Table 1 point."""
        for params, obs in _lower_points(table1_grid()):
            evaluation = reference_evaluation(params, obs)
            assert abs(evaluation.large_value - evaluation.small_value) <= agreement_tolerance(evaluation), (params, obs)

    def test_table2_grid(self, table2_reference):
        """Test that both series agree at every Table 2 point."""
        for params, obs, evaluation in table2_reference:
            assert abs(evaluation.large_value - evaluation.small_value) <= agreement_tolerance(evaluation), (params, obs)

    def test_rounding_bound_negligible_when_well_conditioned(self):
        """Test that the rounding bound is tiny at a moderate point."""
        evaluation = reference_evaluation(DdmParams(v=0, a=1, w=0.5), Observation(Choice.LOWER, 1.0))
        assert evaluation.rounding_bound_large < 1e-13
        assert evaluation.rounding_bound_small < 1e-13


class TestMethodAccuracy:
    """Test suite comparing every method with the reference density."""

    @pytest.mark.parametrize("method", ALL_METHODS, ids=lambda m: m.name)
    def test_table2_grid(self, method, table2_reference):
        """Test that each method is within eps of the reference over Table 2."""
        for params, obs, evaluation in table2_reference:
            result = density(method, params, obs)
            assert result.converged
            tolerance = method_tolerance(EPS, evaluation, result.timescale_used is Timescale.LARGE)
            assert abs(result.value - evaluation.value) <= tolerance, (method.name, params, obs)

    def test_method_tolerance_adds_large_bound_only_for_large_time(self):
        """Test that the large-time rounding bound counts only when that series was used."""
        evaluation = OracleEvaluation(0.1, 0.1, 0.1, 1e-9, 1e-12)
        assert method_tolerance(EPS, evaluation, False) == pytest.approx(EPS + 8e-12)
        assert method_tolerance(EPS, evaluation, True) == pytest.approx(EPS + 8e-9 + 8e-12)


class TestNormalization:
    """Test suite for probability mass checks."""

    def test_reference_mass_is_one(self):
        """Test that the reference density integrates to 1 at the canonical point."""
        assert check_normalization(DdmParams(v=0, a=1, w=0.5)) == pytest.approx(1.0, abs=1e-6)

    def test_reference_mass_with_variable_drift(self):
        """Test normalization of the reference density with eta > 0."""
        assert check_normalization(DdmParams(v=1.0, a=1.5, w=0.4, t0=0.2, eta=1.0)) == pytest.approx(1.0, abs=1e-6)

    def test_symmetric_masses(self):
        """Test that v = 0, w = 0.5 splits the mass evenly."""
        default = MethodSpec(MethodKind.COMBINED_SWSE, SumStyle.S17)
        params = DdmParams(v=0, a=1, w=0.5)
        lower, upper = boundary_masses(params, density_fn=lambda obs: density(default, params, obs).value)
        assert lower == pytest.approx(0.5, abs=1e-6)
        assert upper == pytest.approx(lower, abs=1e-9)

    def test_default_method_over_table1(self):
        """Test that the default method integrates to 1 for twelve Table 1 sets with a <= 2.5."""
        default = MethodSpec.parse(config.DEFAULT_METHOD)
        sets = normalization_sets(table1_grid())
        assert len(sets) == 12
        assert max(params.a for params in sets) <= 2.5
        for params in sets:
            mass = check_normalization(params, density_fn=lambda obs, p=params: density(default, p, obs).value)
            assert mass == pytest.approx(1.0, abs=config.NORMALIZATION_TOL), params
