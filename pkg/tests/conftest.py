"""Shared fixtures for the simulator test suites"""

import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from models.asset import Asset  # noqa: E402
from models.simulation_config import SimulationConfig  # noqa: E402
from models.time_preference import AttackShock, TimePreferenceModel, UsabilityProfile  # noqa: E402
from models.units import annual_rate_to_hourly  # noqa: E402

FIXTURES_DIR = Path(__file__).parent / 'fixtures'


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def datacentre_model() -> TimePreferenceModel:
    return TimePreferenceModel(a=5.8e-5, r_eq=annual_rate_to_hourly(0.5), V=1.0, lambda_market=0.2)


@pytest.fixture
def datacentre(datacentre_model) -> Asset:
    """The data-centre asset of the worked example"""
    return Asset(
        id="datacentre",
        category="company",
        M0=1e7,
        rM=-4.76e-5,
        value_rate_own=5e8,
        value_rate_contingent=5e8,
        TK=2160.0,
        model=datacentre_model,
        usability=UsabilityProfile(kind="linear_decreasing", TK_ref=2160.0, VA=0.0, lambda_usability=0.0),
        A0_post=0.0,
        capability_value=2.5e8,
    )


@pytest.fixture
def attack() -> list:
    return [AttackShock(time=0.0, magnitude=1.0)]


@pytest.fixture
def quiet_config() -> SimulationConfig:
    return SimulationConfig(dt=1.0, horizon=24.0, n_paths=1, seed=42, noise_enabled=False)
