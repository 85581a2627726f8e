"""
Damage And Claim Tests
Damage triples, portfolio aggregation and counter-measure reports
"""

import dataclasses
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from core.integrator import Trajectory, simulate_path
from processors.claim_reporter import (
    PROCESS_KINDS,
    CountermeasureProcess,
    build_claim_report,
    countermeasure_report,
)
from processors.damage_assessor import TRIPLE_FIELDS, DamageTriple, aggregate_portfolio, committed_annuity, damage_triple

HOURLY_VALUE = 1e9 / 8760.0


def constructed_trajectory(A: np.ndarray, dt: float, shock_index=0) -> Trajectory:
    """Trajectory with zero monetary series and the given usability"""
    times = np.arange(len(A)) * dt
    zeros = np.zeros(len(A))
    return Trajectory(
        times=times,
        r=np.full(len(A), 0.5),
        M=zeros,
        K=zeros,
        A=A,
        dM_cumulative=zeros,
        dt=dt,
        shock_index=shock_index,
        half_restoration_time=float("nan"),
    )


class TestDamageTriple:
    def test_recovery_triangle(self, datacentre):
        dt = 1e-3
        times = np.arange(1001) * dt
        trajectory = constructed_trajectory(np.minimum(1.0, 1.2 * times), dt)
        triple = damage_triple(trajectory, datacentre, window=1.0)
        assert triple.degraded_value == pytest.approx(HOURLY_VALUE * 0.5 / 1.2, rel=1e-3)
        assert triple.degraded_value == pytest.approx(47565.0, rel=1e-3)
        assert triple.short_term_monetary == 0.0

    def test_unattacked_baseline_has_no_degradation(self, datacentre):
        trajectory = constructed_trajectory(np.ones(25), 1.0, shock_index=None)
        triple = damage_triple(trajectory, datacentre, window=24.0, start=0.0)
        assert triple.degraded_value == 0.0

    def test_unanchored_window_rejected(self, datacentre):
        trajectory = constructed_trajectory(np.ones(25), 1.0, shock_index=None)
        with pytest.raises(ValueError, match="no attack shock"):
            damage_triple(trajectory, datacentre, window=5.0)

    def test_window_past_horizon_rejected(self, datacentre):
        trajectory = constructed_trajectory(np.zeros(25), 1.0, shock_index=10)
        with pytest.raises(ValueError, match="exceeds the simulated horizon"):
            damage_triple(trajectory, datacentre, window=20.0)

    def test_degraded_value_monotone_in_usability(self, datacentre):
        rng = np.random.default_rng(7)
        A = rng.uniform(0.0, 1.0, 49)
        lower = damage_triple(constructed_trajectory(A, 0.5), datacentre, window=24.0)
        higher = damage_triple(constructed_trajectory(np.minimum(1.0, A + 0.1), 0.5), datacentre, window=24.0)
        assert higher.degraded_value <= lower.degraded_value

    def test_worked_example_first_hour(self, datacentre, attack, quiet_config):
        trajectory = simulate_path(datacentre, quiet_config, attack)
        triple = damage_triple(trajectory, datacentre, window=1.0)

        assert triple.short_term_monetary == pytest.approx(9999524.0, rel=1e-12)
        # the attack step drives K to its floor, so only the committed annuity remains
        assert triple.raw_initial_investment == pytest.approx(-2.5e8 / 2160.0)
        assert triple.initial_investment == 0.0
        assert triple.committed_annuity == pytest.approx(2.5e8, rel=1e-12)
        assert triple.long_term_investment == pytest.approx(2.5e8, rel=1e-12)
        # A goes 0 -> 0.2 over the hour
        assert triple.degraded_value == pytest.approx(0.9 * HOURLY_VALUE, rel=1e-12)

    def test_committed_annuity_from_rates(self, datacentre):
        asset = dataclasses.replace(datacentre, capability_value=None)
        assert committed_annuity(asset) == pytest.approx(HOURLY_VALUE * 2160.0)


class TestAggregatePortfolio:
    def test_empty(self):
        assert aggregate_portfolio([]) == DamageTriple()

    def test_single(self):
        triple = DamageTriple(1.0, 2.0, 3.0, 0.5, 1.5, 0.5)
        assert aggregate_portfolio([triple]) == triple

    def test_componentwise(self):
        total = aggregate_portfolio([DamageTriple(1.0, 2.0, 3.0), DamageTriple(10.0, 20.0, 30.0)])
        assert (total.short_term_monetary, total.long_term_investment, total.degraded_value) == (11.0, 22.0, 33.0)

    def test_random_triples_sum_in_declared_order(self):
        rng = np.random.default_rng(20240)
        magnitudes = 10.0 ** rng.integers(-3, 10, size=(40, len(TRIPLE_FIELDS)))
        values = rng.random((40, len(TRIPLE_FIELDS))) * magnitudes
        triples = [DamageTriple(**dict(zip(TRIPLE_FIELDS, map(float, row)))) for row in values]
        total = aggregate_portfolio(triples)
        for column, name in enumerate(TRIPLE_FIELDS):
            expected = 0.0
            for row in values:
                expected += float(row[column])
            assert getattr(total, name) == expected


class TestCountermeasureReport:
    @pytest.fixture
    def triple(self):
        return DamageTriple(short_term_monetary=1e7, long_term_investment=2.5e8, degraded_value=5e4)

    def test_retaliation_claim_is_plain_sum(self, triple):
        report = countermeasure_report(triple, CountermeasureProcess("retaliation"))
        assert report.claim == 1e7 + 2.5e8 + 5e4
        assert report.claim == pytest.approx(2.6005e8)
        assert report.to_dict()["claim_against_attacker_assets"] == report.claim
        assert not report.internal_only

    @pytest.mark.parametrize("kind", ["dissuasive", "retaliation", "compensation"])
    def test_external_claims_equal_sum(self, triple, kind):
        report = countermeasure_report(triple, CountermeasureProcess(kind))
        assert report.claim == triple.claim_total()
        assert report.internal_assessment == triple.claim_total()

    def test_dissuasive_announces(self, triple):
        report = countermeasure_report(triple, CountermeasureProcess("dissuasive"))
        assert report.to_dict()["announced_claim"] == triple.claim_total()

    def test_compensation_court_figures(self, triple):
        report = countermeasure_report(triple, CountermeasureProcess("compensation")).to_dict()
        assert report["court_claim"] == triple.claim_total()
        assert report["court_short_term_monetary"] == 1e7
        assert report["court_long_term_investment"] == 2.5e8
        assert report["court_degraded_value"] == 5e4

    def test_keep_silent_is_internal(self, triple):
        report = countermeasure_report(triple, CountermeasureProcess("keep_silent"))
        assert report.internal_only
        assert report.claim is None
        assert "claim" not in report.to_dict()
        assert report.internal_assessment == triple.claim_total()

    @pytest.mark.parametrize("kind", PROCESS_KINDS)
    def test_zero_triple(self, kind):
        report = countermeasure_report(DamageTriple(), CountermeasureProcess(kind))
        assert report.internal_assessment == 0.0
        assert report.claim in (None, 0.0)

    def test_unknown_process_lists_kinds(self):
        with pytest.raises(ValueError, match="dissuasive, retaliation, compensation, keep_silent"):
            CountermeasureProcess("revenge")

    def test_build_report_aggregates_in_order(self, triple):
        named = [("b", triple), ("a", DamageTriple(1.0, 2.0, 3.0))]
        report = build_claim_report(named, CountermeasureProcess("retaliation"), claim_samples=[1.0, 2.0, 3.0])
        assert [asset_id for asset_id, _ in report.per_asset] == ["b", "a"]
        assert report.total.short_term_monetary == 1e7 + 1.0
        assert report.distribution.mean == pytest.approx(2.0)
        assert report.distribution.n_paths == 3
        assert report.to_dict()["claim_distribution"]["median"] == pytest.approx(2.0)
