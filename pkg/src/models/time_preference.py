"""
Time-preference model, attack shocks and usability profiles

These are the parameters of the mean-reverting time-preference process
    dr = a (r_eq - r) dt - V dW
and of the usability driver WA. All rates are per hour.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

USABILITY_KINDS = ("linear_decreasing", "piecewise", "brownian")


@dataclass(frozen=True)
class TimePreferenceModel:
    """Parameters of the time-preference process for one asset class"""

    a: float
    r_eq: float
    V: float
    lambda_market: float = 0.0

    def violations(self, prefix: str = "model") -> List[Tuple[str, str]]:
        """Return (field path, message) pairs for every broken invariant"""
        found = []
        if not self.a >= 0:
            found.append((f"{prefix}.a", f"reversion intensity must be >= 0, got {self.a}"))
        if not 0 < self.r_eq < 1:
            found.append((f"{prefix}.r_eq", f"equilibrium time preference must lie in (0, 1) per hour, got {self.r_eq}"))
        if not self.V >= 0:
            found.append((f"{prefix}.V", f"volatility must be >= 0, got {self.V}"))
        if not self.lambda_market >= 0:
            found.append((f"{prefix}.lambda_market", f"market risk premium must be >= 0, got {self.lambda_market}"))
        return found


@dataclass(frozen=True)
class AttackShock:
    """A timed jump of magnitude S injected into the driver W"""

    time: float
    magnitude: float = 1.0

    def violations(self, prefix: str = "shock") -> List[Tuple[str, str]]:
        found = []
        if not self.time >= 0:
            found.append((f"{prefix}.time", f"shock time must be >= 0, got {self.time}"))
        if not self.magnitude >= 0:
            found.append((f"{prefix}.magnitude", f"shock magnitude must be >= 0, got {self.magnitude}"))
        return found


@dataclass(frozen=True)
class UsabilityProfile:
    """
    Usability risk driver WA(t)

    linear_decreasing follows WA(t) = 1 - t/TK_ref, piecewise interpolates
    the (time, WA) knots and brownian is pure Gaussian noise.
    """

    kind: str = "linear_decreasing"
    TK_ref: float = 2160.0
    VA: float = 0.0
    lambda_usability: float = 0.0
    knots: Tuple[Tuple[float, float], ...] = field(default_factory=tuple)

    def violations(self, prefix: str = "usability") -> List[Tuple[str, str]]:
        found = []
        if self.kind not in USABILITY_KINDS:
            found.append((f"{prefix}.kind", f"must be one of {', '.join(USABILITY_KINDS)}, got {self.kind!r}"))
        if self.kind == "linear_decreasing" and not self.TK_ref > 0:
            found.append((f"{prefix}.TK_ref", f"linear profile horizon must be positive, got {self.TK_ref}"))
        if not self.VA >= 0:
            found.append((f"{prefix}.VA", f"usability volatility must be >= 0, got {self.VA}"))
        if self.kind == "piecewise":
            if len(self.knots) < 2:
                found.append((f"{prefix}.knots", "piecewise profile needs at least two knots"))
            times = [t for t, _ in self.knots]
            if any(t1 <= t0 for t0, t1 in zip(times, times[1:])):
                found.append((f"{prefix}.knots", "knot times must be strictly increasing"))
            for idx, (_, value) in enumerate(self.knots):
                if not 0 <= value <= 1:
                    found.append((f"{prefix}.knots[{idx}]", f"WA value must lie in [0, 1], got {value}"))
        return found
