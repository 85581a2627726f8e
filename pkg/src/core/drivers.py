"""
Brownian drivers W and WA with attack shocks

Each path owns two independent generators derived from
SeedSequence([seed, path_index]); the SeedSequence hash gives the
avalanche mixing, so any path can be regenerated alone and paths may be
simulated in any order or grouping.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from models.simulation_config import SimulationConfig
from models.time_preference import AttackShock, UsabilityProfile

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DriverIncrements:
    """Per-step increments of the time-preference driver and the usability driver"""

    dW: np.ndarray
    dWA: np.ndarray


def path_generators(seed: int, path_index: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """Independent (time-preference, usability) generators for one path"""
    root = np.random.SeedSequence([seed, path_index])
    ss_rate, ss_usability = root.spawn(2)
    return np.random.default_rng(ss_rate), np.random.default_rng(ss_usability)


def shock_steps(config: SimulationConfig, shocks: Sequence[AttackShock]) -> Dict[int, float]:
    """
    Map shocks onto step indices

    Args:
        config: Simulation configuration
        shocks: Shocks sorted by time

    Returns:
        {step index: summed magnitude}

    Raises:
        ValueError: unsorted shocks or shocks outside [0, horizon)
    """
    n_steps = config.n_steps
    steps: Dict[int, float] = {}
    previous = None
    for idx, shock in enumerate(shocks):
        if previous is not None and shock.time < previous:
            raise ValueError(f"shocks must be sorted by time: shock {idx} at {shock.time} h follows {previous} h")
        previous = shock.time
        if not shock.magnitude >= 0:
            raise ValueError(f"shock {idx}: magnitude must be >= 0, got {shock.magnitude}")
        step = int(round(shock.time / config.dt))
        if shock.time < 0 or step >= n_steps:
            raise ValueError(
                f"shock {idx} at {shock.time} h lies outside the simulated horizon [0, {config.horizon}) h"
            )
        steps[step] = steps.get(step, 0.0) + shock.magnitude
    return steps


def first_shock_step(config: SimulationConfig, shocks: Sequence[AttackShock]) -> Optional[int]:
    steps = shock_steps(config, shocks)
    return min(steps) if steps else None


def usability_profile_increments(usability: UsabilityProfile, dt: float, start: int, stop: int) -> np.ndarray:
    """Deterministic part of dWA for steps [start, stop)"""
    count = stop - start
    if usability.kind == "linear_decreasing":
        return np.full(count, -dt / usability.TK_ref)
    if usability.kind == "piecewise":
        knot_times = np.array([t for t, _ in usability.knots], dtype=float)
        knot_values = np.array([v for _, v in usability.knots], dtype=float)
        grid = np.arange(start, stop + 1, dtype=float) * dt
        profile = np.interp(grid, knot_times, knot_values)
        return np.diff(profile)
    return np.zeros(count)


class DriverStream:
    """
    Generates driver increments for a group of paths, block by block

    Drawing a block of B normals at a time from each path's generator yields
    the same numbers as one full draw, so block size never changes results.
    """

    def __init__(
        self,
        config: SimulationConfig,
        shocks: Sequence[AttackShock],
        usability: UsabilityProfile,
        path_indices: Sequence[int],
        rho: float = 0.0
    ):
        if not -1.0 <= rho <= 1.0:
            raise ValueError(f"correlation rho must lie in [-1, 1], got {rho}")
        self.config = config
        self.usability = usability
        self.path_indices = list(path_indices)
        self.rho = rho
        self.shocks = shock_steps(config, shocks)
        self.sqrt_dt = float(np.sqrt(config.dt))
        self._noisy_usability = config.noise_enabled and usability.kind == "brownian"

        self._generators: List[Tuple[np.random.Generator, np.random.Generator]] = []
        if config.noise_enabled:
            self._generators = [path_generators(config.seed, idx) for idx in self.path_indices]

    def block(self, start: int, stop: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Increments for steps [start, stop)

        Returns:
            (dW, dWA) arrays of shape (n_paths, stop - start)
        """
        n_paths = len(self.path_indices)
        count = stop - start
        dW = np.zeros((n_paths, count))
        dWA = np.tile(usability_profile_increments(self.usability, self.config.dt, start, stop), (n_paths, 1))

        if self.config.noise_enabled:
            z_rate = np.empty((n_paths, count))
            for row, (rate_rng, _) in enumerate(self._generators):
                z_rate[row] = rate_rng.standard_normal(count)
            dW += self.sqrt_dt * z_rate

            if self._noisy_usability:
                z_usability = np.empty((n_paths, count))
                for row, (_, usability_rng) in enumerate(self._generators):
                    z_usability[row] = usability_rng.standard_normal(count)
                mixed = self.rho * z_rate + np.sqrt(1.0 - self.rho * self.rho) * z_usability
                dWA += self.sqrt_dt * mixed

        # shocks push W down so that -V dW raises r
        for step, magnitude in self.shocks.items():
            if start <= step < stop:
                dW[:, step - start] -= magnitude

        return dW, dWA


def make_increments(
    config: SimulationConfig,
    shocks: Sequence[AttackShock],
    path_index: int,
    usability: UsabilityProfile,
    rho: float = 0.0
) -> DriverIncrements:
    """
    Full-horizon driver increments for one path

    Args:
        config: Simulation configuration (dt, horizon, seed, noise switch)
        shocks: Attack shocks sorted by time, inside the horizon
        path_index: Non-negative path index
        usability: Usability profile shaping dWA
        rho: Correlation between the W and WA noises (brownian profile only)

    Returns:
        DriverIncrements with one entry per step
    """
    if path_index < 0:
        raise ValueError(f"path_index must be >= 0, got {path_index}")
    stream = DriverStream(config, shocks, usability, [path_index], rho)
    dW, dWA = stream.block(0, config.n_steps)
    return DriverIncrements(dW=dW[0], dWA=dWA[0])
