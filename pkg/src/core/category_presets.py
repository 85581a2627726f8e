"""
Category Presets - parameter defaults for the four kinds of attacked assets

Only the company rule (largest of return on assets and operational margin)
yields a number from inputs; the other categories carry a judgment default
or demand an explicit time preference.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional

from models.asset import ASSET_CATEGORIES
from models.units import annual_rate_to_hourly

logger = logging.getLogger(__name__)

R_EQ_RULES = ("fixed", "max_roa_margin", "explicit")


@dataclass(frozen=True)
class CategoryPreset:
    """Defaults and time-preference policy for one asset category"""

    category: str
    name: str
    r_eq_rule: str
    r_eq_annual: Optional[float]
    TK: float
    lambda_market: float
    lambda_usability: float
    judgment_value: bool = False
    requires_explicit_r_eq: bool = False
    high_priority_continuity: bool = False
    notes: str = ""

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CategoryPreset":
        """Build a preset from one entry of the presets JSON document"""
        preset = cls(
            category=data["id"],
            name=data.get("name", data["id"]),
            r_eq_rule=data["r_eq_rule"],
            r_eq_annual=data.get("r_eq_annual"),
            TK=float(data.get("TK", 2160.0)),
            lambda_market=float(data.get("lambda_market", 0.0)),
            lambda_usability=float(data.get("lambda_usability", 0.0)),
            judgment_value=bool(data.get("judgment_value", False)),
            requires_explicit_r_eq=bool(data.get("requires_explicit_r_eq", False)),
            high_priority_continuity=bool(data.get("high_priority_continuity", False)),
            notes=data.get("notes", ""),
        )
        if preset.r_eq_rule not in R_EQ_RULES:
            raise ValueError(f"preset {preset.category}: unknown r_eq_rule {preset.r_eq_rule!r}")
        if preset.r_eq_rule == "fixed" and preset.r_eq_annual is None:
            raise ValueError(f"preset {preset.category}: fixed rule needs r_eq_annual")
        return preset

    def resolve_r_eq_annual(self, return_on_assets: Optional[float] = None,
                            operational_margin: Optional[float] = None) -> float:
        """
        Annual equilibrium time preference under this category's rule

        Args:
            return_on_assets: Sector return on assets per year (company rule)
            operational_margin: Sector operational margin per year (company rule)

        Returns:
            Annual rate

        Raises:
            ValueError: when the rule cannot produce a value from the inputs
        """
        if self.r_eq_rule == "fixed":
            return float(self.r_eq_annual)

        if self.r_eq_rule == "max_roa_margin":
            candidates = [v for v in (return_on_assets, operational_margin) if v is not None]
            if not candidates:
                raise ValueError(
                    f"{self.category} preset needs return_on_assets or operational_margin, or an explicit r_eq"
                )
            return float(max(candidates))

        raise ValueError(
            f"{self.category} preset has no numeric default: give r_eq or r_eq_annual explicitly "
            f"(tolerable postponement is a judgment value)"
        )

    def resolve_r_eq(self, return_on_assets: Optional[float] = None,
                     operational_margin: Optional[float] = None) -> float:
        """Hourly equilibrium time preference under this category's rule"""
        return annual_rate_to_hourly(self.resolve_r_eq_annual(return_on_assets, operational_margin))


BUILTIN_PRESETS: Dict[str, CategoryPreset] = {
    "public_service": CategoryPreset(
        category="public_service",
        name="Public services",
        r_eq_rule="fixed",
        r_eq_annual=0.9,
        TK=2160.0,
        lambda_market=0.2,
        lambda_usability=0.0,
        judgment_value=True,
        high_priority_continuity=True,
        notes="High time preference where public authorities have legal obligations of service continuity.",
    ),
    "company": CategoryPreset(
        category="company",
        name="Company products and services",
        r_eq_rule="max_roa_margin",
        r_eq_annual=None,
        TK=2160.0,
        lambda_market=0.2,
        lambda_usability=0.0,
        notes="Largest of the sector's return on assets and operational margin.",
    ),
    "shared_infrastructure": CategoryPreset(
        category="shared_infrastructure",
        name="Shared infrastructures",
        r_eq_rule="explicit",
        r_eq_annual=None,
        TK=2160.0,
        lambda_market=0.2,
        lambda_usability=0.0,
        judgment_value=True,
        requires_explicit_r_eq=True,
        notes="Tolerable postponement of access; r_eq must be given explicitly.",
    ),
    "technology_provider": CategoryPreset(
        category="technology_provider",
        name="Technology providers",
        r_eq_rule="max_roa_margin",
        r_eq_annual=None,
        TK=2160.0,
        lambda_market=0.2,
        lambda_usability=0.0,
        notes="Company rule applied to the provider's own sector.",
    ),
}


def load_presets(entries: Optional[Iterable[Dict[str, Any]]] = None) -> Dict[str, CategoryPreset]:
    """
    Merge preset entries from configuration over the built-in presets

    Args:
        entries: Preset dictionaries, e.g. ConfigManager.get_all_presets()

    Returns:
        Mapping of category to preset covering all four categories
    """
    presets = dict(BUILTIN_PRESETS)
    for entry in entries or ():
        category = entry.get("id")
        if category not in ASSET_CATEGORIES:
            logger.warning(f"Ignoring preset for unknown category {category!r}")
            continue
        try:
            presets[category] = CategoryPreset.from_dict(entry)
        except (KeyError, TypeError, ValueError) as e:
            logger.error(f"Invalid preset {category!r}, keeping built-in defaults: {e}")
    return presets


def category_preset(category: str, presets: Optional[Dict[str, CategoryPreset]] = None) -> CategoryPreset:
    """
    Look up the preset for an asset category

    Args:
        category: One of the four asset categories
        presets: Preset table from load_presets (defaults to built-ins)

    Returns:
        CategoryPreset

    Raises:
        ValueError: naming the four valid kinds for an unknown category
    """
    table = presets if presets is not None else BUILTIN_PRESETS
    if category not in ASSET_CATEGORIES or category not in table:
        raise ValueError(f"unknown asset category {category!r}; valid kinds: {', '.join(ASSET_CATEGORIES)}")
    return table[category]
