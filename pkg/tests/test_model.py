import math

import numpy as np
import pytest

from prodline import (
    ConfigurationError,
    ModelParams,
    PiecewiseConstantInflow,
    Scenario,
    failure_rate,
    mean_time_to_failure,
    repair_rate,
)

# Independent high-precision references (mpmath, 20 digits).
FAILURE_RATE_AT_10 = 1.3010290617742596
MTTF_PAPER = 9.181687423997606


class TestFailureRate:
    def test_zero_workload_is_exactly_lambda_min(self, paper_params):
        assert failure_rate(0.0, paper_params) == paper_params.lambda_10_min

    def test_infinite_workload_saturates_at_lambda_max(self, paper_params):
        assert failure_rate(np.inf, paper_params) == paper_params.lambda_10_max

    def test_value_at_w10(self, paper_params):
        assert failure_rate(10.0, paper_params) == pytest.approx(FAILURE_RATE_AT_10, rel=1e-14)

    def test_negative_workload_rejected(self, paper_params):
        with pytest.raises(ValueError):
            failure_rate(-0.1, paper_params)

    def test_monotone_and_bounded(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            lo = float(rng.uniform(0.0, 1.0))
            params = ModelParams(
                lambda_10_min=lo,
                lambda_10_max=lo + float(rng.uniform(0.0, 3.0)),
                theta1=float(rng.uniform(0.01, 2.0)),
                theta2=float(rng.uniform(0.2, 8.0)),
            )
            w = np.sort(rng.uniform(0.0, 60.0, 50))
            rates = failure_rate(w, params)
            assert np.all(np.diff(rates) >= -1e-15)
            assert np.all(rates >= params.lambda_10_min - 1e-15)
            assert np.all(rates <= params.lambda_10_max + 1e-15)

    def test_array_input_matches_scalar(self, paper_params):
        w = np.array([0.0, 2.0, 10.0])
        rates = failure_rate(w, paper_params)
        assert rates.shape == (3,)
        assert rates[2] == failure_rate(10.0, paper_params)


class TestRepairRate:
    def test_paper_value(self):
        assert repair_rate(0.0, ModelParams(lambda_01=1 / 0.5)) == 2.0

    def test_constant_in_workload(self, paper_params):
        assert repair_rate(0.0, paper_params) == repair_rate(100.0, paper_params)

    def test_zero_rate_machine_never_repairs(self):
        assert repair_rate(5.0, ModelParams(lambda_01=0.0)) == 0.0


class TestMeanTimeToFailure:
    def test_paper_value(self, paper_params):
        assert mean_time_to_failure(paper_params) == pytest.approx(MTTF_PAPER, rel=1e-10)

    def test_scipy_cross_check(self, paper_params):
        from scipy.special import gamma

        assert mean_time_to_failure(paper_params) == pytest.approx(
            float(gamma(1.2)) * 10.0, rel=1e-12
        )

    @pytest.mark.parametrize("theta1", [0.25, 0.3, 2.0])
    def test_exponential_case_is_reciprocal_scale(self, theta1):
        params = ModelParams(theta1=theta1, theta2=1.0)
        assert mean_time_to_failure(params) * theta1 == pytest.approx(1.0, abs=1e-12)

    def test_characteristic_times(self, paper_params):
        # expected failure times for the two constant inflows, reported as 18.4 and 6.1
        for g_in, expected in ((0.5, 18.4), (1.5, 6.1)):
            t_char = mean_time_to_failure(paper_params) / g_in
            assert abs(t_char - expected) < 0.05


class TestModelParamsValidation:
    @pytest.mark.parametrize(
        "kwargs,key",
        [
            ({"v": 0.0}, "v"),
            ({"c": -1.0}, "c"),
            ({"a": 1.0, "b": 0.5}, "b"),
            ({"theta1": -0.1}, "theta1"),
            ({"theta2": 0.0}, "theta2"),
            ({"lambda_10_min": -0.5}, "lambda_10_min"),
            ({"lambda_10_min": 3.0, "lambda_10_max": 2.0}, "lambda_10_max"),
            ({"lambda_01": -2.0}, "lambda_01"),
        ],
    )
    def test_invalid_params_name_the_field(self, kwargs, key):
        with pytest.raises(ConfigurationError, match=key):
            ModelParams(**kwargs)

    def test_zero_rates_allowed(self):
        ModelParams(lambda_10_min=0.0, lambda_10_max=0.0, lambda_01=0.0)


class TestScenario:
    def test_cfl_violation_rejected(self, paper_params):
        with pytest.raises(ConfigurationError, match="CFL"):
            Scenario(params=paper_params, inflow=0.5, dx=0.1, dt=0.2)

    def test_non_integer_cell_count_rejected(self, paper_params):
        with pytest.raises(ConfigurationError, match="cell count"):
            Scenario(params=paper_params, inflow=0.5, dx=0.3, dt=0.1)

    def test_scalar_rho0_broadcasts(self, paper_params):
        sc = Scenario(params=paper_params, inflow=0.5, rho0=0.25)
        assert sc.n_cells == 10
        assert np.array_equal(sc.rho0, np.full(10, 0.25))

    def test_sample_times_hit_horizon_exactly(self, paper_params):
        sc = Scenario(params=paper_params, inflow=0.5, horizon=50.0)
        times = sc.sample_times()
        assert times[0] == 0.0
        assert times[-1] == 50.0
        assert times.size == 501

    def test_sample_times_with_thinning(self, paper_params):
        sc = Scenario(params=paper_params, inflow=0.5, horizon=50.0, output_thinning=5)
        times = sc.sample_times()
        assert times[-1] == 50.0
        assert times.size == 101

    def test_initial_workload_defaults_to_initial_mass(self, paper_params):
        sc = Scenario(params=paper_params, inflow=0.5, rho0=0.8)
        assert sc.initial_state().w == pytest.approx(0.8, rel=1e-14)

    def test_initial_workload_override(self, paper_params):
        sc = Scenario(params=paper_params, inflow=0.5, rho0=0.8, w0=0.0)
        assert sc.initial_state().w == 0.0

    def test_negative_inflow_rejected(self, paper_params):
        with pytest.raises(ConfigurationError, match="inflow"):
            Scenario(params=paper_params, inflow=-0.5)

    def test_piecewise_inflow_lookup(self):
        profile = PiecewiseConstantInflow([0.0, 1.0, 2.5], [0.5, 1.5, 0.0])
        assert profile(0.0) == 0.5
        assert profile(0.99) == 0.5
        assert profile(1.0) == 1.5
        assert profile(2.6) == 0.0

    def test_constant_profile_shortcut(self):
        profile = PiecewiseConstantInflow.constant(1.5)
        assert profile(0.0) == 1.5 and profile(123.0) == 1.5
