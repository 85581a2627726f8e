"""
Damage Assessor - turns simulated paths into the three-dimensional damage scaling

    a) short-term monetary mass: sum of dM over the restoration window
    b) long-term investment: initial dK over the shock step plus the
       committed annuity over TK
    c) degraded value: value rate times the usability gap integrated
       (trapezoidal rule) over the window
"""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from core.analytic import hourly_annuity
from core.integrator import PathState, Trajectory
from models.asset import Asset

logger = logging.getLogger(__name__)

TRIPLE_FIELDS = (
    "short_term_monetary",
    "long_term_investment",
    "degraded_value",
    "initial_investment",
    "committed_annuity",
    "raw_initial_investment",
)


@dataclass(frozen=True)
class DamageTriple:
    """
    Damage scaling of one asset or a whole portfolio, EUR

    long_term_investment = initial_investment + committed_annuity;
    raw_initial_investment keeps the unfloored dK for auditing.
    """

    short_term_monetary: float = 0.0
    long_term_investment: float = 0.0
    degraded_value: float = 0.0
    initial_investment: float = 0.0
    committed_annuity: float = 0.0
    raw_initial_investment: float = 0.0

    def claim_total(self) -> float:
        """Plain sum of the three damage dimensions"""
        return self.short_term_monetary + self.long_term_investment + self.degraded_value

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def committed_annuity(asset: Asset) -> float:
    """Hourly annuity of the capability value times TK"""
    return hourly_annuity(asset.total_capability_value(), asset.TK) * asset.TK


def compose_triple(asset: Asset, short_term: float, raw_initial: float, degraded_hours: float) -> DamageTriple:
    initial = max(raw_initial, 0.0)
    committed = committed_annuity(asset)
    return DamageTriple(
        short_term_monetary=short_term,
        long_term_investment=initial + committed,
        degraded_value=asset.value_rate_hourly() * degraded_hours,
        initial_investment=initial,
        committed_annuity=committed,
        raw_initial_investment=raw_initial,
    )


@dataclass(frozen=True, eq=False)
class PathDamages:
    """Per-path damage components of one asset, arrays of length n_paths"""

    asset: Asset
    short_term_monetary: np.ndarray
    raw_initial_investment: np.ndarray
    degraded_hours: np.ndarray
    window: float
    start: float

    def triple(self, index: int) -> DamageTriple:
        return compose_triple(
            self.asset,
            float(self.short_term_monetary[index]),
            float(self.raw_initial_investment[index]),
            float(self.degraded_hours[index]),
        )

    def triples(self) -> List[DamageTriple]:
        return [self.triple(i) for i in range(len(self.short_term_monetary))]

    def mean_triple(self) -> DamageTriple:
        """Componentwise mean over paths (initial investment floored per path first)"""
        initial = np.maximum(self.raw_initial_investment, 0.0)
        committed = committed_annuity(self.asset)
        return DamageTriple(
            short_term_monetary=float(np.mean(self.short_term_monetary)),
            long_term_investment=float(np.mean(initial)) + committed,
            degraded_value=self.asset.value_rate_hourly() * float(np.mean(self.degraded_hours)),
            initial_investment=float(np.mean(initial)),
            committed_annuity=committed,
            raw_initial_investment=float(np.mean(self.raw_initial_investment)),
        )

    def claims(self) -> np.ndarray:
        """Per-path claim totals (sum of the three dimensions)"""
        initial = np.maximum(self.raw_initial_investment, 0.0)
        return (
            self.short_term_monetary
            + (initial + committed_annuity(self.asset))
            + self.asset.value_rate_hourly() * self.degraded_hours
        )


class DamageAccumulator:
    """
    Step observer accumulating damage over [start_step, start_step + window_steps)

    Works on vectors of paths, so the ensemble runner can plug it straight
    into the batch integrator.
    """

    def __init__(self, asset: Asset, dt: float, start_step: int, window_steps: int, n_paths: int = 1):
        self.asset = asset
        self.dt = dt
        self.start_step = start_step
        self.stop_step = start_step + window_steps
        self.short_term = np.zeros(n_paths)
        self.degraded_hours = np.zeros(n_paths)
        self.raw_initial = np.zeros(n_paths)

    def add_step(self, n: int, prev: PathState, nxt: PathState, dM: np.ndarray):
        if not self.start_step <= n < self.stop_step:
            return
        self.short_term = self.short_term + dM
        self.degraded_hours = self.degraded_hours + 0.5 * ((1.0 - prev.A) + (1.0 - nxt.A)) * self.dt
        if n == self.start_step:
            self.raw_initial = nxt.K - prev.K

    def result(self) -> PathDamages:
        return PathDamages(
            asset=self.asset,
            short_term_monetary=self.short_term,
            raw_initial_investment=self.raw_initial,
            degraded_hours=self.degraded_hours,
            window=(self.stop_step - self.start_step) * self.dt,
            start=self.start_step * self.dt,
        )


def resolve_window(dt: float, n_steps: int, start_step: int, window: float) -> int:
    """Window length in steps; rejects windows running past the horizon"""
    if not window >= 0:
        raise ValueError(f"window must be >= 0, got {window}")
    window_steps = int(round(window / dt))
    if start_step + window_steps > n_steps:
        raise ValueError(
            f"window of {window} h starting at {start_step * dt} h exceeds the simulated horizon of {n_steps * dt} h"
        )
    return window_steps


def damage_triple(trajectory: Trajectory, asset: Asset, window: float, start: Optional[float] = None) -> DamageTriple:
    """
    Damage triple of one trajectory

    Args:
        trajectory: Simulated path
        asset: The asset the path belongs to
        window: Window length, hours
        start: Window start in hours; None anchors at the first shock

    Returns:
        DamageTriple for the window
    """
    dt = trajectory.dt
    if start is None:
        if trajectory.shock_index is None:
            raise ValueError("trajectory has no attack shock to anchor the damage window; pass an explicit start")
        start_step = trajectory.shock_index
    else:
        start_step = int(round(start / dt))
    n_steps = len(trajectory.times) - 1
    if not 0 <= start_step <= n_steps:
        raise ValueError(f"window start {start_step * dt} h lies outside the trajectory")
    window_steps = resolve_window(dt, n_steps, start_step, window)

    accumulator = DamageAccumulator(asset, dt, start_step, window_steps)
    cumulative = trajectory.dM_cumulative
    for n in range(start_step, start_step + window_steps):
        prev = PathState(r=trajectory.r[n:n + 1], M=trajectory.M[n:n + 1],
                         K=trajectory.K[n:n + 1], A=trajectory.A[n:n + 1])
        nxt = PathState(r=trajectory.r[n + 1:n + 2], M=trajectory.M[n + 1:n + 2],
                        K=trajectory.K[n + 1:n + 2], A=trajectory.A[n + 1:n + 2])
        accumulator.add_step(n, prev, nxt, cumulative[n + 1:n + 2] - cumulative[n:n + 1])
    return accumulator.result().triple(0)


def aggregate_portfolio(triples: Sequence[DamageTriple]) -> DamageTriple:
    """Componentwise sum in the given order"""
    totals = {name: 0.0 for name in TRIPLE_FIELDS}
    for triple in triples:
        for name in TRIPLE_FIELDS:
            totals[name] += getattr(triple, name)
    return DamageTriple(**totals)
