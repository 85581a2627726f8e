"""
Euler-Maruyama integration of the coupled r, M, K, A processes

Step functions accept floats or numpy arrays (one entry per path) so the
same arithmetic drives single trajectories and vectorized path batches.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Protocol, Sequence, Tuple

import numpy as np

from core.analytic import beta_k, hourly_annuity
from core.drivers import DriverStream, first_shock_step
from models.asset import Asset, validate_asset
from models.simulation_config import USABILITY_MODES, SimulationConfig
from models.time_preference import AttackShock, TimePreferenceModel, UsabilityProfile

logger = logging.getLogger(__name__)

HALF_USABILITY = 0.5

# normals drawn per generator call are capped to keep block memory bounded
_BLOCK_BUDGET = 2 ** 21


def _require_dt(dt: float):
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")


def step_r(r_prev, dW_step, model: TimePreferenceModel, dt: float):
    """r_next = clamp(r + a (r_eq - r) dt - V dW, 0, 1)"""
    return np.clip(r_prev + model.a * (model.r_eq - r_prev) * dt - model.V * dW_step, 0.0, 1.0)


def step_M(M_prev, r, rM: float, dt: float):
    """
    Advance the short-term monetary mass

    Returns:
        (M_next, dM) with dM = M_prev (r + rM) dt
    """
    _require_dt(dt)
    dM = M_prev * (r + rM) * dt
    return M_prev + dM, dM


def step_K(K_prev, r, dW_step, model: TimePreferenceModel, TK: float, dt: float):
    """K_next = K (1 + r dt + V Beta_K (dW + lambda_market dt)), floored at 0"""
    _require_dt(dt)
    duration = beta_k(model.a, TK)
    growth = 1.0 + r * dt + model.V * duration * (dW_step + model.lambda_market * dt)
    return np.maximum(K_prev * growth, 0.0)


def step_A(A_prev, r, dW_step, dWA_step, model: TimePreferenceModel,
           usability: UsabilityProfile, mode: str, dt: float):
    """
    Advance usability

    multiplicative applies A (1 + drift) as printed in the dA equation (A = 0
    is absorbing); linearized adds the drift as an absolute increment.
    """
    _require_dt(dt)
    drift = (
        r * dt
        + model.V * (dW_step + model.lambda_market * dt)
        + usability.VA * (dWA_step + usability.lambda_usability * dt)
    )
    if mode == "multiplicative":
        return np.clip(A_prev * (1.0 + drift), 0.0, 1.0)
    if mode == "linearized":
        return np.clip(A_prev + drift, 0.0, 1.0)
    raise ValueError(f"usability mode must be one of {', '.join(USABILITY_MODES)}, got {mode!r}")


@dataclass(frozen=True, eq=False)
class PathState:
    """State of every path in a batch at one time index"""

    r: np.ndarray
    M: np.ndarray
    K: np.ndarray
    A: np.ndarray


class StepObserver(Protocol):
    def add_step(self, n: int, prev: PathState, nxt: PathState, dM: np.ndarray) -> None:
        ...


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Full time series of one path; every series has len(times) entries"""

    times: np.ndarray
    r: np.ndarray
    M: np.ndarray
    K: np.ndarray
    A: np.ndarray
    dM_cumulative: np.ndarray
    dt: float
    shock_index: Optional[int]
    half_restoration_time: float

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def dM(self) -> np.ndarray:
        """Per-step monetary increments (one fewer than the series length)"""
        return np.diff(self.dM_cumulative)


@dataclass(frozen=True, eq=False)
class BatchResult:
    """Recorded series of a path batch, arrays shaped (n_paths, n_records)"""

    path_indices: List[int]
    times: np.ndarray
    r: np.ndarray
    M: np.ndarray
    K: np.ndarray
    A: np.ndarray
    dM_cumulative: np.ndarray
    half_restoration_times: np.ndarray
    shock_index: Optional[int]


def initial_investment_level(asset: Asset) -> float:
    """K(0): hourly annuity of the capability value, or the total value itself"""
    total = asset.total_capability_value()
    if asset.k0_mode == "total_value":
        return total
    return hourly_annuity(total, asset.TK)


def check_inputs(asset: Asset, config: SimulationConfig):
    problems = validate_asset(asset) + [f"{path}: {message}" for path, message in config.violations()]
    if problems:
        raise ValueError(f"invalid simulation inputs for asset {asset.id!r}: " + "; ".join(problems))


def simulate_batch(
    asset: Asset,
    config: SimulationConfig,
    shocks: Sequence[AttackShock],
    path_indices: Sequence[int],
    rho: float = 0.0,
    record_every: Optional[int] = None,
    observers: Iterable[StepObserver] = ()
) -> BatchResult:
    """
    Integrate a batch of paths on their own driver streams

    Args:
        asset: Attack target
        config: Simulation configuration
        shocks: Attack shocks sorted by time
        path_indices: Path indices of this batch (each fixes its random stream)
        rho: Correlation between W and WA noises
        record_every: Recording stride in steps (defaults to config.record_every)
        observers: Objects notified of every step at full resolution

    Returns:
        BatchResult with the recorded series
    """
    check_inputs(asset, config)
    observers = list(observers)
    stride = record_every or config.record_every
    dt = config.dt
    n_steps = config.n_steps
    n_paths = len(path_indices)
    model = asset.model
    usability = asset.usability
    mode = config.usability_mode

    stream = DriverStream(config, shocks, usability, path_indices, rho)
    shock_index = first_shock_step(config, shocks)
    anchor = shock_index or 0

    record_steps = np.arange(0, n_steps + 1, stride)
    if record_steps[-1] != n_steps:
        # final state is always recorded, even off the stride
        record_steps = np.append(record_steps, n_steps)
    times = record_steps * dt
    n_records = len(record_steps)
    recorded = {name: np.empty((n_paths, n_records)) for name in ("r", "M", "K", "A", "dM_cumulative")}

    r = np.full(n_paths, model.r_eq)
    M = np.full(n_paths, float(asset.M0))
    K = np.full(n_paths, initial_investment_level(asset))
    A = np.ones(n_paths)
    dM_cumulative = np.zeros(n_paths)
    crossing = np.full(n_paths, np.nan)

    block_size = max(1, min(n_steps, _BLOCK_BUDGET // max(1, n_paths)))
    block_start = 0
    dW_block = dWA_block = None

    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(n_steps + 1):
            if n == shock_index:
                A = np.full(n_paths, float(asset.A0_post))

            if shock_index is None or n >= shock_index:
                reached = np.isnan(crossing) & (A >= HALF_USABILITY)
                crossing[reached] = (n - anchor) * dt

            if n % stride == 0 or n == n_steps:
                column = n_records - 1 if n == n_steps else n // stride
                recorded["r"][:, column] = r
                recorded["M"][:, column] = M
                recorded["K"][:, column] = K
                recorded["A"][:, column] = A
                recorded["dM_cumulative"][:, column] = dM_cumulative

            if n == n_steps:
                break

            if dW_block is None or n >= block_start + dW_block.shape[1]:
                block_start = n
                dW_block, dWA_block = stream.block(n, min(n + block_size, n_steps))
            dW = dW_block[:, n - block_start]
            dWA = dWA_block[:, n - block_start]

            r_next = step_r(r, dW, model, dt)
            M_next, dM = step_M(M, r_next, asset.rM, dt)
            K_next = step_K(K, r_next, dW, model, asset.TK, dt)
            A_next = step_A(A, r_next, dW, dWA, model, usability, mode, dt)

            if observers:
                prev = PathState(r=r, M=M, K=K, A=A)
                nxt = PathState(r=r_next, M=M_next, K=K_next, A=A_next)
                for observer in observers:
                    observer.add_step(n, prev, nxt, dM)

            r, M, K, A = r_next, M_next, K_next, A_next
            dM_cumulative = dM_cumulative + dM

    if not (np.all(np.isfinite(M)) and np.all(np.isfinite(K))):
        logger.warning(
            f"Asset {asset.id}: monetary mass or investment overflowed within {config.horizon} h; "
            f"consider a shorter horizon"
        )

    return BatchResult(
        path_indices=list(path_indices),
        times=times,
        r=recorded["r"],
        M=recorded["M"],
        K=recorded["K"],
        A=recorded["A"],
        dM_cumulative=recorded["dM_cumulative"],
        half_restoration_times=crossing,
        shock_index=shock_index,
    )


def simulate_path(
    asset: Asset,
    config: SimulationConfig,
    shocks: Sequence[AttackShock],
    path_index: int = 0,
    rho: float = 0.0
) -> Trajectory:
    """
    Simulate one path at full time resolution

    Deterministic given (config.seed, path_index).
    """
    if path_index < 0:
        raise ValueError(f"path_index must be >= 0, got {path_index}")
    batch = simulate_batch(asset, config, shocks, [path_index], rho=rho, record_every=1)
    return Trajectory(
        times=batch.times,
        r=batch.r[0],
        M=batch.M[0],
        K=batch.K[0],
        A=batch.A[0],
        dM_cumulative=batch.dM_cumulative[0],
        dt=config.dt,
        shock_index=batch.shock_index,
        half_restoration_time=float(batch.half_restoration_times[0]),
    )
