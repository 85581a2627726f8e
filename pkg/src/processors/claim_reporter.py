"""
Claim Reporter - maps damage assessments onto counter-measure processes

The claim is the plain sum of the three damage dimensions; no weighting is
applied, so users can re-weight the reported components themselves.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from processors.damage_assessor import DamageTriple, aggregate_portfolio

logger = logging.getLogger(__name__)

PROCESS_KINDS = ("dissuasive", "retaliation", "compensation", "keep_silent")

NARRATIVES = {
    "dissuasive": (
        "Claims announced ahead of any attack: these amounts would be raised and "
        "recovered by all legal means should a denial of service occur."
    ),
    "retaliation": (
        "Attackers traced or strongly presumed: claims of the same size are directed "
        "against direct or indirect interests and assets of the attackers."
    ),
    "compensation": (
        "Attackers identified and brought to trial: figures enter a court procedure "
        "and are subject to contradictory evaluation."
    ),
    "keep_silent": (
        "Attack neither reported nor pursued; the assessment is kept for internal "
        "exposure valuation only."
    ),
}

CLAIM_FIELD = {
    "dissuasive": "announced_claim",
    "retaliation": "claim_against_attacker_assets",
    "compensation": "court_claim",
}


@dataclass(frozen=True)
class CountermeasureProcess:
    """One of the four usage processes for damage assessments"""

    kind: str

    def __post_init__(self):
        if self.kind not in PROCESS_KINDS:
            raise ValueError(f"unknown process {self.kind!r}; valid kinds: {', '.join(PROCESS_KINDS)}")

    @property
    def external(self) -> bool:
        return self.kind != "keep_silent"


@dataclass(frozen=True)
class ClaimDistribution:
    """Ensemble spread of the portfolio claim, EUR"""

    mean: float
    median: float
    q95: float
    n_paths: int

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "ClaimDistribution":
        values = np.asarray(samples, dtype=float)
        if values.size == 0:
            raise ValueError("claim distribution needs at least one sample")
        return cls(
            mean=float(np.mean(values)),
            median=float(np.median(values)),
            q95=float(np.quantile(values, 0.95)),
            n_paths=int(values.size),
        )


@dataclass(frozen=True)
class ClaimReport:
    """Counter-measure report built on the portfolio damage triple"""

    process: CountermeasureProcess
    per_asset: Tuple[Tuple[str, DamageTriple], ...]
    total: DamageTriple
    claim: Optional[float]
    internal_only: bool
    internal_assessment: float
    narrative: str
    figures: Tuple[Tuple[str, float], ...] = field(default_factory=tuple)
    distribution: Optional[ClaimDistribution] = None

    def to_dict(self) -> Dict[str, Any]:
        report: Dict[str, Any] = {
            "process": self.process.kind,
            "internal_only": self.internal_only,
            "narrative": self.narrative,
            "per_asset": [{"asset_id": asset_id, **triple.to_dict()} for asset_id, triple in self.per_asset],
            "total": self.total.to_dict(),
            "internal_assessment": self.internal_assessment,
        }
        if self.claim is not None:
            report["claim"] = self.claim
        report.update(dict(self.figures))
        if self.distribution is not None:
            report["claim_distribution"] = {
                "mean": self.distribution.mean,
                "median": self.distribution.median,
                "q95": self.distribution.q95,
                "n_paths": self.distribution.n_paths,
            }
        return report


def countermeasure_report(
    total: DamageTriple,
    process: CountermeasureProcess,
    per_asset: Sequence[Tuple[str, DamageTriple]] = (),
    distribution: Optional[ClaimDistribution] = None
) -> ClaimReport:
    """
    Render the damage assessment for a counter-measure process

    Args:
        total: Portfolio damage triple
        process: Usage process
        per_asset: Optional (asset id, triple) pairs behind the total
        distribution: Optional ensemble spread of the claim

    Returns:
        ClaimReport; keep_silent carries no external claim
    """
    amount = total.claim_total()
    figures: Tuple[Tuple[str, float], ...] = ()
    claim: Optional[float] = None

    if process.external:
        claim = amount
        figures = ((CLAIM_FIELD[process.kind], amount),)
        if process.kind == "compensation":
            figures += (
                ("court_short_term_monetary", total.short_term_monetary),
                ("court_long_term_investment", total.long_term_investment),
                ("court_degraded_value", total.degraded_value),
            )

    return ClaimReport(
        process=process,
        per_asset=tuple(per_asset),
        total=total,
        claim=claim,
        internal_only=not process.external,
        internal_assessment=amount,
        narrative=NARRATIVES[process.kind],
        figures=figures,
        distribution=distribution,
    )


def build_claim_report(
    named_triples: Sequence[Tuple[str, DamageTriple]],
    process: CountermeasureProcess,
    claim_samples: Optional[Sequence[float]] = None
) -> ClaimReport:
    """Aggregate per-asset triples in the given order and render the report"""
    total = aggregate_portfolio([triple for _, triple in named_triples])
    distribution = ClaimDistribution.from_samples(claim_samples) if claim_samples is not None else None
    logger.info(f"Claim report ({process.kind}): total {total.claim_total():.6g} EUR over {len(named_triples)} asset(s)")
    return countermeasure_report(total, process, named_triples, distribution)
