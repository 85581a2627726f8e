"""Core simulation modules"""
from .analytic import beta_k, ou_moments, recovery_growth_rate, half_restoration_time, deterministic_dM, hourly_annuity
from .drivers import DriverIncrements, make_increments
from .integrator import Trajectory, simulate_path, step_r, step_M, step_K, step_A
from .category_presets import CategoryPreset, category_preset

__all__ = [
    'beta_k', 'ou_moments', 'recovery_growth_rate', 'half_restoration_time', 'deterministic_dM', 'hourly_annuity',
    'DriverIncrements', 'make_increments',
    'Trajectory', 'simulate_path', 'step_r', 'step_M', 'step_K', 'step_A',
    'CategoryPreset', 'category_preset',
]
