"""
Results Writer - serializes ensemble statistics and claim reports

CSV carries one row per recorded time step of a single asset. JSON carries
every asset's series plus the damage triple and the claim report; floats are
written with repr precision so parsing reproduces them exactly, and
non-finite values (overflowed monetary mass) become null.
"""

import io
import json
import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from processors.claim_reporter import ClaimDistribution, ClaimReport
from processors.damage_assessor import TRIPLE_FIELDS, DamageTriple
from processors.ensemble_runner import SERIES_NAMES, PathStatistics

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
OUTPUT_FORMATS = ("csv", "json")

CSV_COLUMNS = (
    "time_h", "r_mean", "r_var", "M_mean", "K_mean",
    "A_mean", "A_q05", "A_q50", "A_q95", "dM_cum_mean",
)

# relative tolerance within which serialized figures reproduce the computation
FIGURE_TOLERANCE = 1e-12


def _clean(value: Any) -> Any:
    """Recursively turn numpy scalars/arrays into plain JSON values, non-finite floats into None"""
    if isinstance(value, dict):
        return {key: _clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_clean(item) for item in value.tolist()]
    if isinstance(value, (np.floating, float)):
        number = float(value)
        return number if math.isfinite(number) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _amount(value: Any) -> float:
    """Inverse of _clean for a money figure: null stands for an overflowed amount"""
    return math.inf if value is None else float(value)


def statistics_frame(stats: PathStatistics) -> pd.DataFrame:
    """Per-step table of one asset in the CSV column order"""
    r, M, K, A = (stats.series[name] for name in SERIES_NAMES)
    return pd.DataFrame({
        "time_h": stats.times,
        "r_mean": r.mean,
        "r_var": r.variance,
        "M_mean": M.mean,
        "K_mean": K.mean,
        "A_mean": A.mean,
        "A_q05": A.q05,
        "A_q50": A.q50,
        "A_q95": A.q95,
        "dM_cum_mean": stats.dM_cumulative_mean,
    }, columns=list(CSV_COLUMNS))


def series_dict(stats: PathStatistics) -> Dict[str, Any]:
    """All per-step series of one asset, keyed by column name"""
    series: Dict[str, Any] = {"time_h": stats.times}
    for name in SERIES_NAMES:
        summary = stats.series[name]
        series[f"{name}_mean"] = summary.mean
        series[f"{name}_var"] = summary.variance
        series[f"{name}_q05"] = summary.q05
        series[f"{name}_q50"] = summary.q50
        series[f"{name}_q95"] = summary.q95
    series["dM_cum_mean"] = stats.dM_cumulative_mean
    series["half_restoration"] = stats.half_restoration_summary()
    return series


def _as_list(stats: Union[PathStatistics, Sequence[PathStatistics]]) -> List[PathStatistics]:
    if isinstance(stats, PathStatistics):
        return [stats]
    return list(stats)


def write_results(
    stats: Union[PathStatistics, Sequence[PathStatistics]],
    report: Optional[ClaimReport],
    fmt: str,
    meta: Optional[Dict[str, Any]] = None
) -> bytes:
    """
    Serialize simulation results

    Args:
        stats: Statistics of one asset, or of every asset for JSON
        report: Claim report for the portfolio (JSON only)
        fmt: 'csv' or 'json'
        meta: Extra meta fields (scenario echo, tool version, run settings)

    Returns:
        UTF-8 bytes; identical inputs give identical bytes
    """
    all_stats = _as_list(stats)
    if fmt not in OUTPUT_FORMATS:
        raise ValueError(f"unknown output format {fmt!r}; expected one of {', '.join(OUTPUT_FORMATS)}")
    if not all_stats:
        raise ValueError("no statistics to write")

    if fmt == "csv":
        if len(all_stats) != 1:
            raise ValueError(f"CSV holds a single asset, got {len(all_stats)}")
        buffer = io.StringIO()
        statistics_frame(all_stats[0]).to_csv(buffer, index=False, lineterminator="\n", na_rep="nan")
        return buffer.getvalue().encode("utf-8")

    first = all_stats[0]
    header: Dict[str, Any] = {
        "version": FORMAT_VERSION,
        "seed": first.seed,
        "dt": first.dt,
        "n_paths": first.n_paths,
        "rates_unit": "per_hour",
        "tolerance": FIGURE_TOLERANCE,
        "assets": [s.asset_id for s in all_stats],
    }
    header.update(meta or {})

    payload = {
        "meta": header,
        "series": {s.asset_id: series_dict(s) for s in all_stats},
        "damage_triple": report.total.to_dict() if report is not None else None,
        "claim_report": report.to_dict() if report is not None else None,
    }
    text = json.dumps(_clean(payload), indent=2, allow_nan=False)
    logger.debug(f"Serialized results for {len(all_stats)} asset(s) as JSON")
    return (text + "\n").encode("utf-8")


def read_claim_inputs(data: Union[str, bytes]) -> Tuple[List[Tuple[str, DamageTriple]], Optional[ClaimDistribution], Dict[str, Any]]:
    """
    Recover per-asset triples from a JSON results document

    Args:
        data: Content written by write_results(..., 'json')

    Returns:
        (named triples in file order, claim distribution or None, meta)

    Raises:
        ValueError: when the document carries no claim report or a
            malformed triple or claim distribution
    """
    document = json.loads(data)
    if not isinstance(document, dict) or not isinstance(document.get("claim_report"), dict):
        raise ValueError("results document has no claim_report section")

    report = document["claim_report"]
    named = []
    for idx, entry in enumerate(report.get("per_asset", [])):
        try:
            values = {name: _amount(entry[name]) for name in TRIPLE_FIELDS}
            named.append((str(entry["asset_id"]), DamageTriple(**values)))
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"claim_report.per_asset[{idx}]: malformed damage triple ({e})")

    distribution = None
    spread = report.get("claim_distribution")
    if spread is not None:
        try:
            distribution = ClaimDistribution(
                mean=_amount(spread["mean"]),
                median=_amount(spread["median"]),
                q95=_amount(spread["q95"]),
                n_paths=int(spread["n_paths"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"claim_report.claim_distribution: malformed claim distribution ({e!r})")
    return named, distribution, document.get("meta", {})


def write_report(report: ClaimReport, fmt: str) -> bytes:
    """
    Serialize a claim report on its own

    JSON mirrors ClaimReport.to_dict(); CSV has one row per asset in
    portfolio order followed by a total row.
    """
    if fmt not in OUTPUT_FORMATS:
        raise ValueError(f"unknown output format {fmt!r}; expected one of {', '.join(OUTPUT_FORMATS)}")

    if fmt == "json":
        text = json.dumps(_clean(report.to_dict()), indent=2, allow_nan=False)
        return (text + "\n").encode("utf-8")

    rows = [(asset_id, triple) for asset_id, triple in report.per_asset]
    rows.append(("total", report.total))
    frame = pd.DataFrame(
        [{"asset_id": asset_id, **triple.to_dict()} for asset_id, triple in rows],
        columns=["asset_id", *TRIPLE_FIELDS],
    )
    amount_column = "claim" if report.process.external else "internal_assessment"
    frame[amount_column] = [triple.claim_total() for _, triple in rows]
    frame.insert(0, "process", report.process.kind)
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n", na_rep="nan")
    return buffer.getvalue().encode("utf-8")
