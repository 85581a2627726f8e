"""Unit conventions: hours are the canonical time unit, rates are per hour"""

HOURS_PER_YEAR = 8760.0
HOURS_PER_QUARTER = 2160.0


def annual_rate_to_hourly(r_annual: float) -> float:
    """
    Convert a per-year rate into the per-hour rate used everywhere internally

    Args:
        r_annual: Rate per year (e.g. 0.5 for a 50 %/year margin)

    Returns:
        Rate per hour
    """
    return r_annual / HOURS_PER_YEAR


def hourly_rate_to_annual(r_hourly: float) -> float:
    """Inverse of annual_rate_to_hourly (used for the annual echo fields)"""
    return r_hourly * HOURS_PER_YEAR
