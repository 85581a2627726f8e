"""
Closed-form quantities of the time-preference model

These serve both as reported outputs and as oracles for the Monte Carlo
engine. ou_moments describes the unclamped process: it is exact only for
paths that never touch the [0, 1] bounds enforced by the simulator.
"""

import math
from dataclasses import dataclass
from typing import Optional

from models.time_preference import TimePreferenceModel


@dataclass(frozen=True)
class OuMoments:
    """Mean and variance of r(t) for the unclamped mean-reverting process"""

    mean: float
    variance: float


@dataclass(frozen=True)
class RestorationTime:
    """Half-restoration time; hours is None when capability never reaches one half"""

    hours: Optional[float]

    @property
    def unbounded(self) -> bool:
        return self.hours is None

    def __str__(self) -> str:
        return "unbounded" if self.hours is None else f"{self.hours:.6g} h"


UNBOUNDED = RestorationTime(None)


def _require_positive(name: str, value: float):
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")


def beta_k(a: float, TK: float) -> float:
    """
    Duration factor Beta_K = (1 - exp(-a TK)) / a

    Args:
        a: Reversion intensity, per hour (>= 0)
        TK: Rebuild horizon, hours (> 0)

    Returns:
        Beta_K in hours; TK itself in the a -> 0 limit
    """
    if not a >= 0:
        raise ValueError(f"reversion intensity a must be >= 0, got {a}")
    _require_positive("TK", TK)
    if a == 0:
        return TK
    # expm1 keeps the small-a limit accurate
    return -math.expm1(-a * TK) / a


def ou_moments(r0: float, model: TimePreferenceModel, t: float) -> OuMoments:
    """
    Mean and variance of r(t) started from r0

    Args:
        r0: Initial time preference, per hour
        model: Time-preference parameters
        t: Elapsed time, hours (>= 0)

    Returns:
        OuMoments of the unclamped process
    """
    if not t >= 0:
        raise ValueError(f"t must be >= 0, got {t}")
    a, V = model.a, model.V
    decay = math.exp(-a * t)
    mean = model.r_eq + (r0 - model.r_eq) * decay
    if a > 0:
        variance = V * V / (2.0 * a) * -math.expm1(-2.0 * a * t)
    else:
        variance = V * V * t
    return OuMoments(mean=mean, variance=variance)


def recovery_growth_rate(r_post: float, V: float, lambda_market: float, VA: float, TK: float) -> float:
    """
    Linearized usability growth rate after an attack

    g = r_post + V * lambda_market - VA / TK; usability recovers only when
    g > 0, which for r_post = 1, V = 1, lambda_market = 0.2 means VA < 1.2 TK.
    """
    _require_positive("TK", TK)
    return r_post + V * lambda_market - VA / TK


def half_restoration_time(g: float) -> RestorationTime:
    """
    Time for usability to climb from 0 to one half at growth rate g

    Returns:
        RestorationTime(0.5 / g) for g > 0, UNBOUNDED otherwise
    """
    if g > 0:
        return RestorationTime(0.5 / g)
    return UNBOUNDED


def deterministic_dM(M_prev: float, r: float, rM: float, dt: float) -> float:
    """Monetary mass increment M(t-dt) * (r(t) + rM) * dt, EUR"""
    _require_positive("dt", dt)
    return M_prev * (r + rM) * dt


def hourly_annuity(total_value: float, TK: float) -> float:
    """Flat (undiscounted) hourly annuity of a total value over TK hours"""
    _require_positive("TK", TK)
    return total_value / TK
