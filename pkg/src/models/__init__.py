"""
Data models for the denial-of-service damage simulator
"""

from .units import HOURS_PER_YEAR, annual_rate_to_hourly, hourly_rate_to_annual
from .errors import ScenarioError, ScenarioIssue
from .time_preference import TimePreferenceModel, AttackShock, UsabilityProfile
from .asset import Asset, validate_asset
from .simulation_config import SimulationConfig

__all__ = [
    'HOURS_PER_YEAR', 'annual_rate_to_hourly', 'hourly_rate_to_annual',
    'ScenarioError', 'ScenarioIssue',
    'TimePreferenceModel', 'AttackShock', 'UsabilityProfile',
    'Asset', 'validate_asset', 'SimulationConfig',
]
