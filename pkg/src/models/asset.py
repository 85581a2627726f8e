"""
Asset - one attack target with its valuation inputs and risk parameters
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from models.time_preference import TimePreferenceModel, UsabilityProfile
from models.units import HOURS_PER_YEAR

ASSET_CATEGORIES = ("public_service", "company", "shared_infrastructure", "technology_provider")
K0_MODES = ("annuity", "total_value")


@dataclass(frozen=True)
class Asset:
    """
    Attack target: monetary base, capability value rates and rebuild horizon

    Monetary amounts are EUR, value rates EUR per year, TK in hours.
    capability_value, when set, replaces the rate-derived total capability
    value over TK.
    """

    id: str
    category: str
    M0: float
    rM: float
    value_rate_own: float
    value_rate_contingent: float
    TK: float
    model: TimePreferenceModel
    usability: UsabilityProfile = field(default_factory=UsabilityProfile)
    A0_post: float = 0.0
    capability_value: Optional[float] = None
    k0_mode: str = "annuity"

    def value_rate_hourly(self) -> float:
        """Own plus contingent value rate in EUR per hour"""
        return (self.value_rate_own + self.value_rate_contingent) / HOURS_PER_YEAR

    def total_capability_value(self) -> float:
        """Total capability value over the rebuild horizon TK, EUR"""
        if self.capability_value is not None:
            return self.capability_value
        return self.value_rate_hourly() * self.TK

    def violations(self) -> List[Tuple[str, str]]:
        """Return (field path, message) pairs for every broken invariant"""
        found = []
        if not self.id:
            found.append(("id", "asset id must not be empty"))
        if self.category not in ASSET_CATEGORIES:
            found.append(("category", f"must be one of {', '.join(ASSET_CATEGORIES)}, got {self.category!r}"))
        if not self.M0 >= 0:
            found.append(("M0", f"initial monetary mass must be >= 0, got {self.M0}"))
        if not self.TK > 0:
            found.append(("TK", f"rebuild horizon must be positive, got {self.TK}"))
        if not 0 <= self.A0_post <= 1:
            found.append(("A0_post", f"post-attack usability must lie in [0, 1], got {self.A0_post}"))
        if not self.value_rate_own >= 0:
            found.append(("value_rate_own", f"must be >= 0, got {self.value_rate_own}"))
        if not self.value_rate_contingent >= 0:
            found.append(("value_rate_contingent", f"must be >= 0, got {self.value_rate_contingent}"))
        if self.capability_value is not None and not self.capability_value >= 0:
            found.append(("capability_value", f"must be >= 0, got {self.capability_value}"))
        if self.k0_mode not in K0_MODES:
            found.append(("k0_mode", f"must be one of {', '.join(K0_MODES)}, got {self.k0_mode!r}"))
        found.extend(self.model.violations("model"))
        found.extend(self.usability.violations("usability"))
        return found


def validate_asset(asset: Asset) -> List[str]:
    """
    Check every invariant of an asset and its nested model/profile

    Args:
        asset: Asset to check

    Returns:
        One "field: message" entry per violation; empty when valid
    """
    return [f"{path}: {message}" for path, message in asset.violations()]
