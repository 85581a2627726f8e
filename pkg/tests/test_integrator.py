"""
Integrator Tests
Euler-Maruyama steps and single-path simulation of r, M, K and A
"""

import dataclasses
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from core.analytic import beta_k, hourly_annuity
from core.integrator import simulate_path, step_A, step_K, step_M, step_r
from models.asset import Asset
from models.simulation_config import SimulationConfig
from models.time_preference import AttackShock, TimePreferenceModel, UsabilityProfile


def recovery_asset(ratio: float, TK: float = 10.0) -> Asset:
    """Asset whose time preference sits at 1 after the attack and never reverts"""
    return Asset(
        id="recovery",
        category="company",
        M0=0.0,
        rM=0.0,
        value_rate_own=0.0,
        value_rate_contingent=0.0,
        TK=TK,
        model=TimePreferenceModel(a=0.0, r_eq=0.5, V=1.0, lambda_market=0.2),
        usability=UsabilityProfile(kind="linear_decreasing", TK_ref=TK, VA=ratio * TK, lambda_usability=0.0),
        A0_post=0.0,
        capability_value=0.0,
    )


class TestSteps:
    def test_r_fixed_point(self, datacentre_model):
        assert step_r(datacentre_model.r_eq, 0.0, datacentre_model, 1.0) == datacentre_model.r_eq

    def test_r_clamps_after_attack(self, datacentre_model):
        assert step_r(5.7078e-5, -1.0, datacentre_model, 1.0) == 1.0

    def test_r_reversion(self):
        model = TimePreferenceModel(a=0.1, r_eq=0.4, V=1.0)
        assert step_r(0.5, 0.0, model, 1.0) == pytest.approx(0.49)

    def test_r_lower_clamp(self):
        model = TimePreferenceModel(a=0.0, r_eq=0.4, V=1.0)
        assert step_r(0.1, 5.0, model, 1.0) == 0.0

    def test_M_first_hour(self):
        M_next, dM = step_M(1e7, 1.0, -4.76e-5, 1.0)
        assert dM == pytest.approx(9999524.0, abs=1e-6)
        assert M_next == pytest.approx(1e7 + 9999524.0)

    def test_M_zero_net_rate(self):
        M_next, dM = step_M(1e7, 0.3, -0.3, 1.0)
        assert dM == 0.0
        assert M_next == 1e7

    def test_M_half_step(self):
        assert step_M(1e6, 0.001, 0.001, 0.5)[1] == pytest.approx(1000.0)

    def test_M_rejects_zero_dt(self):
        with pytest.raises(ValueError, match="dt"):
            step_M(1.0, 0.1, 0.0, 0.0)

    def test_K_without_volatility(self):
        model = TimePreferenceModel(a=0.01, r_eq=0.1, V=0.0, lambda_market=0.2)
        assert step_K(100.0, 0.05, 0.7, model, 2160.0, 1.0) == pytest.approx(105.0)

    def test_K_absorbing_zero(self, datacentre_model):
        assert step_K(0.0, 1.0, 0.3, datacentre_model, 2160.0, 1.0) == 0.0

    def test_K_annuity_first_hour(self, datacentre_model):
        K0 = hourly_annuity(2.5e8, 2160.0)
        expected = K0 * (1.0 + 1.0 + beta_k(5.8e-5, 2160.0) * 0.2)
        K1 = step_K(K0, 1.0, 0.0, datacentre_model, 2160.0, 1.0)
        assert K1 == pytest.approx(expected, rel=1e-12)
        assert K1 == pytest.approx(4.72e7, rel=1e-3)

    def test_K_floored(self, datacentre_model):
        assert step_K(1000.0, 1.0, -1.0, datacentre_model, 2160.0, 1.0) == 0.0

    def test_A_multiplicative_absorbing(self, datacentre_model):
        usability = UsabilityProfile()
        assert step_A(0.0, 1.0, 0.0, 0.0, datacentre_model, usability, "multiplicative", 1.0) == 0.0

    def test_A_linearized_upper_clamp(self):
        model = TimePreferenceModel(a=0.0, r_eq=0.5, V=0.0)
        usability = UsabilityProfile(VA=0.0)
        assert step_A(0.9, 0.5, 0.0, 0.0, model, usability, "linearized", 1.0) == 1.0

    def test_A_unknown_mode(self, datacentre_model):
        with pytest.raises(ValueError, match="usability mode"):
            step_A(0.5, 0.1, 0.0, 0.0, datacentre_model, UsabilityProfile(), "other", 1.0)


class TestSimulatePath:
    def test_worked_example_first_hour(self, datacentre, attack, quiet_config):
        trajectory = simulate_path(datacentre, quiet_config, attack)
        assert trajectory.r[0] == datacentre.model.r_eq
        assert trajectory.r[1] == 1.0
        assert trajectory.dM[0] == pytest.approx(9999524.0, rel=1e-12)
        assert 9.99e6 < trajectory.dM[0] < 1.0e7
        assert trajectory.A[0] == 0.0
        assert trajectory.shock_index == 0
        assert len(trajectory.times) == 25

    def test_series_share_length(self, datacentre, attack, quiet_config):
        trajectory = simulate_path(datacentre, quiet_config, attack)
        lengths = {len(s) for s in (trajectory.times, trajectory.r, trajectory.M, trajectory.K,
                                    trajectory.A, trajectory.dM_cumulative)}
        assert lengths == {25}

    def test_post_attack_usability_applied_at_shock(self, datacentre, quiet_config):
        trajectory = simulate_path(datacentre, quiet_config, [AttackShock(5.0, 1.0)])
        assert np.all(trajectory.A[:5] == 1.0)
        assert trajectory.A[5] == 0.0
        assert trajectory.shock_index == 5

    def test_shock_response(self):
        asset = dataclasses.replace(recovery_asset(0.0), model=TimePreferenceModel(a=0.01, r_eq=0.1, V=0.2))
        config = SimulationConfig(dt=1.0, horizon=10.0, n_paths=1, noise_enabled=False)
        trajectory = simulate_path(asset, config, [AttackShock(3.0, 1.0)])
        assert trajectory.r[3] == pytest.approx(0.1, abs=1e-15)
        assert trajectory.r[4] - trajectory.r[3] == pytest.approx(0.2, rel=1e-12)

    def test_deterministic(self, datacentre, attack):
        config = SimulationConfig(dt=1.0, horizon=24.0, n_paths=1, seed=99)
        first = simulate_path(datacentre, config, attack, path_index=3)
        second = simulate_path(datacentre, config, attack, path_index=3)
        for name in ("r", "M", "K", "A", "dM_cumulative"):
            assert np.array_equal(getattr(first, name), getattr(second, name))

    @pytest.mark.parametrize("rM", [0.0, -0.05])
    def test_cumulative_mass_grows_while_rate_nonnegative(self, datacentre, rM):
        asset = dataclasses.replace(
            datacentre, M0=1e6, rM=rM,
            model=TimePreferenceModel(a=0.05, r_eq=0.05, V=0.05, lambda_market=0.2),
        )
        config = SimulationConfig(dt=1.0, horizon=200.0, n_paths=1, seed=13)
        trajectory = simulate_path(asset, config, [AttackShock(20.0, 0.5)], path_index=2)
        growing = trajectory.r[1:] + rM >= 0
        assert growing.any()
        assert np.all(trajectory.dM[growing] >= 0.0)
        if rM == 0.0:
            assert np.all(np.diff(trajectory.dM_cumulative) >= 0.0)

    def test_bounds_hold_under_noise(self, datacentre):
        asset = dataclasses.replace(
            datacentre,
            model=TimePreferenceModel(a=0.05, r_eq=0.3, V=0.4, lambda_market=0.2),
            usability=UsabilityProfile(kind="brownian", VA=0.8),
        )
        config = SimulationConfig(dt=0.5, horizon=200.0, n_paths=1, seed=1)
        for index in range(5):
            trajectory = simulate_path(asset, config, [AttackShock(10.0)], path_index=index, rho=0.3)
            assert np.all((trajectory.r >= 0.0) & (trajectory.r <= 1.0))
            assert np.all((trajectory.A >= 0.0) & (trajectory.A <= 1.0))

    def test_multiplicative_mode_stays_denied(self, datacentre, attack):
        config = SimulationConfig(dt=1.0, horizon=24.0, n_paths=1, noise_enabled=False,
                                  usability_mode="multiplicative")
        trajectory = simulate_path(datacentre, config, attack)
        assert np.all(trajectory.A == 0.0)
        assert np.isnan(trajectory.half_restoration_time)

    def test_rejects_invalid_asset(self, datacentre, attack, quiet_config):
        with pytest.raises(ValueError, match="TK"):
            simulate_path(dataclasses.replace(datacentre, TK=0.0), quiet_config, attack)


class TestZeroVolatility:
    def test_closed_form_reduction(self):
        model = TimePreferenceModel(a=0.01, r_eq=1e-4, V=0.0, lambda_market=0.2)
        asset = Asset(
            id="calm",
            category="company",
            M0=1e6,
            rM=2e-5,
            value_rate_own=1e6,
            value_rate_contingent=0.0,
            TK=2160.0,
            model=model,
            usability=UsabilityProfile(VA=0.0),
        )
        config = SimulationConfig(dt=1.0, horizon=1e4, n_paths=1, noise_enabled=False)
        trajectory = simulate_path(asset, config, [])
        n = np.arange(len(trajectory.times))

        assert np.all(trajectory.r == model.r_eq)
        assert np.all(trajectory.A == 1.0)
        assert trajectory.shock_index is None
        np.testing.assert_allclose(trajectory.M / asset.M0, (1.0 + (model.r_eq + asset.rM)) ** n, rtol=1e-9)
        K0 = trajectory.K[0]
        np.testing.assert_allclose(trajectory.K / K0, (1.0 + model.r_eq) ** n, rtol=1e-9)


class TestHalfRestoration:
    @pytest.mark.parametrize("ratio", [0.0, 0.3, 0.6, 0.9, 1.1])
    def test_crossing_matches_formula(self, ratio):
        dt = 1e-3
        expected = 0.5 / (1.2 - ratio)
        config = SimulationConfig(dt=dt, horizon=6.0, n_paths=1, noise_enabled=False)
        trajectory = simulate_path(recovery_asset(ratio), config, [AttackShock(0.0, 1.0)])
        assert abs(trajectory.half_restoration_time - expected) <= 2 * dt + 1e-9

    @pytest.mark.parametrize("ratio", [1.2, 1.5, 2.0])
    def test_never_restored_beyond_threshold(self, ratio):
        TK = 10.0
        config = SimulationConfig(dt=1e-2, horizon=10 * TK, n_paths=1, noise_enabled=False)
        trajectory = simulate_path(recovery_asset(ratio, TK), config, [AttackShock(0.0, 1.0)])
        assert np.isnan(trajectory.half_restoration_time)
        assert trajectory.A.max() < 0.5
